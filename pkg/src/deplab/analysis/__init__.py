from deplab.analysis.cfg import Cfg, build_cfg
from deplab.analysis.control import ControlDeps, control_dependencies
from deplab.analysis.defuse import DefUse, def_use_sets
from deplab.analysis.pdg import FunctionAnalysis, Pdg, analyze_source, build_pdg, pdg_to_dot, pdg_to_json
from deplab.analysis.postdom import post_dominators
from deplab.analysis.reaching import OccurrenceDataDep, data_dependencies, reaching_definitions

__all__ = [
    "Cfg",
    "build_cfg",
    "ControlDeps",
    "control_dependencies",
    "DefUse",
    "def_use_sets",
    "post_dominators",
    "OccurrenceDataDep",
    "data_dependencies",
    "reaching_definitions",
    "Pdg",
    "build_pdg",
    "FunctionAnalysis",
    "analyze_source",
    "pdg_to_dot",
    "pdg_to_json",
]
