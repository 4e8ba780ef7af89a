"""Perfect path decompositions of dense digraphs via absorbing structures."""

from .absorber import (AbsorbingStructure, AvailabilityLedger, build_A0_structure, build_dotA_structure,
                       merge_structures, split_structure, validate_structure)
from .absorption import (AbsorptionOutcome, absorb_long, absorb_medium, absorb_one_cycle, absorb_pair,
                         absorb_short)
from .cycles import CycleBundle, classify_cycles, peel_cycles
from .decomposer import (Decomposition, RunResult, StageReport, greedy_excess_paths, perfect_decompose,
                         verify_decomposition)
from .digraph import (Digraph, VertexPartition, edge_counts, excess, excess_vector, is_eulerian,
                      partition_by_excess, total_excess)
from .errors import (AbsorptionError, ContractViolation, OracleCapExceeded, PathDecError,
                     StructureBuildError)
from .flow import FlowNetwork, IntegerFlow, build_fp, decompose_unit_flows, max_flow, residual_reachable
from .generator import ClassReport, Parameters, classify, compute_parameters, gen_dnp, gen_example_class
from .oracle import brute_force_pn, is_consistent

__version__ = "0.1.0"

__all__ = [
    "AbsorbingStructure",
    "AbsorptionError",
    "AbsorptionOutcome",
    "AvailabilityLedger",
    "ClassReport",
    "ContractViolation",
    "CycleBundle",
    "Decomposition",
    "Digraph",
    "FlowNetwork",
    "IntegerFlow",
    "OracleCapExceeded",
    "Parameters",
    "PathDecError",
    "RunResult",
    "StageReport",
    "StructureBuildError",
    "VertexPartition",
    "absorb_long",
    "absorb_medium",
    "absorb_one_cycle",
    "absorb_pair",
    "absorb_short",
    "brute_force_pn",
    "build_A0_structure",
    "build_dotA_structure",
    "build_fp",
    "classify",
    "classify_cycles",
    "compute_parameters",
    "decompose_unit_flows",
    "edge_counts",
    "excess",
    "excess_vector",
    "gen_dnp",
    "gen_example_class",
    "greedy_excess_paths",
    "is_consistent",
    "is_eulerian",
    "max_flow",
    "merge_structures",
    "partition_by_excess",
    "peel_cycles",
    "perfect_decompose",
    "residual_reachable",
    "split_structure",
    "total_excess",
    "validate_structure",
    "verify_decomposition",
]
