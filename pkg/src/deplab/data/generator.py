"""Grammar-directed random function generator.

Produces parsable, analyzable functions over the supported C subset:
declarations up front, then a random mix of assignments, compound
assignments, calls and nested if/while/for up to a configurable depth.
``break``/``continue``/``return`` appear only in tail position so no dead
code is emitted. Output is deterministic per (seed, index): function i of a
corpus is generated from its own derived RNG, so prefixes of a corpus are
stable under growth.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from deplab.analysis.pdg import analyze_source

VAR_WORDS = [
    "acc", "base", "cnt", "delta", "err", "flag", "idx", "len2", "lim",
    "mask", "num", "off", "pos", "rate", "res", "size", "step", "sum2",
    "tmp", "total", "val", "width",
]
CALL_WORDS = ["check", "emit", "log_val", "probe", "update", "use"]


@dataclass
class GenProfile:
    """Size profile for one corpus. Node counts are drawn from a low-skewed
    distribution inside [min_nodes, max_nodes]; nesting probability decays
    with depth."""

    min_vars: int = 4
    max_vars: int = 12
    min_nodes: int = 3
    max_nodes: int = 40
    mean_extra_nodes: float = 6.0  # geometric mean above min_nodes
    max_depth: int = 3
    p_control: float = 0.5    # chance that a statement slot becomes if/while/for
    depth_decay: float = 0.45  # p_control multiplier per nesting level
    p_else: float = 0.35
    p_array: float = 0.03
    p_tail_jump: float = 0.1   # break/continue at the end of a loop body
    p_return: float = 0.2


ORACLE_PROFILE = GenProfile(min_vars=3, max_vars=6, min_nodes=2, max_nodes=12,
                            mean_extra_nodes=5.0, max_depth=2, p_control=0.45)


class _FunctionBuilder:
    def __init__(self, rng: random.Random, profile: GenProfile, name: str):
        self.rng = rng
        self.profile = profile
        self.name = name
        self.lines: list[str] = []
        n_vars = rng.randint(profile.min_vars, profile.max_vars)
        words = rng.sample(VAR_WORDS, min(n_vars, len(VAR_WORDS)))
        self.pool = [w if rng.random() < 0.85 else f"{w}{rng.randint(0, 9)}" for w in words]
        self.defined: set[str] = set()

    def var(self) -> str:
        return self.rng.choice(self.pool)

    def literal(self) -> str:
        return str(self.rng.randint(0, 30))

    def operand(self) -> str:
        r = self.rng.random()
        if r < 0.6:
            return self.var()
        if r < 0.97:
            return self.literal()
        return f"{self.var()}[{self.var()}]"

    def expr(self) -> str:
        r = self.rng.random()
        if r < 0.45:
            return self.operand()
        if r < 0.92:
            op = self.rng.choice(["+", "-", "*", "/", "%"])
            return f"{self.operand()} {op} {self.operand()}"
        if r < 0.97:
            op1, op2 = (self.rng.choice(["+", "-", "*"]) for _ in range(2))
            return f"{self.operand()} {op1} {self.operand()} {op2} {self.operand()}"
        return f"{self.rng.choice(CALL_WORDS)}({self.var()})"

    def condition(self) -> str:
        cmp_op = self.rng.choice(["<", ">", "<=", ">=", "==", "!="])
        left = self.var()
        right = self.var() if self.rng.random() < 0.4 else self.literal()
        cond = f"{left} {cmp_op} {right}"
        if self.rng.random() < 0.06:
            join = self.rng.choice(["&&", "||"])
            cond = f"{cond} {join} {self.var()} {self.rng.choice(['<', '>'])} {self.literal()}"
        return cond

    def assign_target(self) -> str:
        # prefer not-yet-defined names: reassignment (and the kills it brings)
        # stays present but uncommon, like straight-line code in the wild
        fresh = [v for v in self.pool if v not in self.defined]
        if fresh and self.rng.random() < 0.75:
            name = self.rng.choice(fresh)
        else:
            name = self.var()
        self.defined.add(name)
        return name

    def simple_statement(self) -> str:
        r = self.rng.random()
        if r < self.profile.p_array:
            return f"{self.var()}[{self.var()}] = {self.expr()};"
        if r < 0.6:
            return f"{self.assign_target()} = {self.expr()};"
        if r < 0.88:
            op = self.rng.choice(["+=", "-=", "*=", "/="])
            name = self.var()
            self.defined.add(name)
            return f"{name} {op} {self.operand()};"
        callee = self.rng.choice(CALL_WORDS)
        args = ", ".join(self.var() for _ in range(self.rng.randint(1, 2)))
        return f"{callee}({args});"

    def gen_block(self, budget: int, depth: int, indent: int, in_loop: bool) -> int:
        """Emit statements consuming exactly ``budget`` nodes; returns usage."""
        pad = "    " * indent
        used = 0
        # occasionally end a loop-body block with break/continue (tail position
        # only, so no dead code is ever emitted)
        tail_jump = in_loop and budget >= 2 and self.rng.random() < self.profile.p_tail_jump
        target = budget - (1 if tail_jump else 0)
        p_control = self.profile.p_control * self.profile.depth_decay ** depth
        while used < target:
            left = target - used
            can_nest = depth < self.profile.max_depth
            r = self.rng.random()
            if can_nest and left >= 4 and r < p_control / 3:
                i = self.var()
                self.defined.add(i)
                bound = self.var() if self.rng.random() < 0.5 else self.literal()
                self.lines.append(f"{pad}for ({i} = 0; {i} < {bound}; {i} += 1) {{")
                used += 3
                used += self.gen_block(self.rng.randint(1, left - 3), depth + 1, indent + 1, True)
                self.lines.append(f"{pad}}}")
            elif can_nest and left >= 2 and r < p_control * 2 / 3:
                self.lines.append(f"{pad}while ({self.condition()}) {{")
                used += 1
                used += self.gen_block(self.rng.randint(1, left - 1), depth + 1, indent + 1, True)
                self.lines.append(f"{pad}}}")
            elif can_nest and left >= 2 and r < p_control:
                self.lines.append(f"{pad}if ({self.condition()}) {{")
                used += 1
                used += self.gen_block(self.rng.randint(1, left - 1), depth + 1, indent + 1, in_loop)
                if self.profile.p_else > self.rng.random() and target - used >= 1:
                    self.lines.append(f"{pad}}} else {{")
                    used += self.gen_block(self.rng.randint(1, target - used), depth + 1,
                                           indent + 1, in_loop)
                self.lines.append(f"{pad}}}")
            else:
                self.lines.append(f"{pad}{self.simple_statement()}")
                used += 1
        if tail_jump:
            self.lines.append(f"{pad}{self.rng.choice(['break', 'continue'])};")
            used += 1
        return used

    def node_budget(self) -> int:
        profile = self.profile
        span = profile.max_nodes - profile.min_nodes
        extra = 0
        if span > 0 and profile.mean_extra_nodes > 0:
            p = 1.0 / (1.0 + profile.mean_extra_nodes)
            while extra < span and self.rng.random() > p:
                extra += 1
        return profile.min_nodes + extra

    def build(self) -> str:
        profile = self.profile
        total = self.node_budget()
        n_decls = min(self.rng.randint(2, 4), len(self.pool), max(1, total // 3))
        declared = self.rng.sample(self.pool, n_decls)
        for name in declared:
            init = self.literal() if self.rng.random() < 0.75 else self.var()
            self.lines.append(f"    int {name} = {init};")
            self.defined.add(name)
        remaining = total - n_decls
        reserve_return = 1 if (self.rng.random() < profile.p_return and remaining > 1) else 0
        if remaining - reserve_return > 0:
            # first body statement always reads a declared variable, so every
            # function carries at least one def-use chain
            src_var = self.rng.choice(declared)
            if self.rng.random() < 0.5:
                self.lines.append(f"    {self.var()} = {src_var} {self.rng.choice(['+', '-', '*'])} {self.literal()};")
            else:
                self.lines.append(f"    {src_var} {self.rng.choice(['+=', '-='])} {self.literal()};")
            self.gen_block(remaining - reserve_return - 1, 0, 1, False)
        if reserve_return:
            body = f"return {self.var()};" if self.rng.random() < 0.6 else "return;"
            self.lines.append(f"    {body}")
        header = f"void {self.name}() {{"
        return "\n".join([header] + self.lines + ["}"]) + "\n"


def generate_function(seed, index: int, profile: GenProfile | None = None) -> str:
    rng = random.Random(f"{seed}/{index}")
    builder = _FunctionBuilder(rng, profile or GenProfile(), f"fn{index}")
    return builder.build()


def gen_synthetic_corpus(seed, n_functions: int, profile: GenProfile | None = None,
                         validate: bool = True) -> list[str]:
    """Generate ``n_functions`` source strings, deterministic under seed."""
    profile = profile or GenProfile()
    corpus = []
    for i in range(n_functions):
        source = generate_function(seed, i, profile)
        if validate:
            analyze_source(source)  # raises if the generator emitted bad code
        corpus.append(source)
    return corpus
