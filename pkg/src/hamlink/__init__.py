"""Verified linkage structures and edge-disjoint Hamiltonian cycles in
highly connected tournaments."""

from .core import (
    Path,
    PathSystem,
    Tournament,
    WorkingDigraph,
    build_tournament,
    is_strongly_connected,
    strong_connectivity,
)
from .classic import (
    cover_by_k_paths,
    gallai_milgram_cover,
    menger_route,
    moon_ham_cycle,
    split_paths,
)
from .constants import audit_constants
from .domination import (
    Dominator,
    GreedySequence,
    build_dominator,
    build_predominator,
    enlarge_exceptional,
    greedy_dominating_sequence,
    greedy_transitive,
    large_degree_vertices,
    short_path_count,
    verify_dominator,
)
from .linkage import (
    Connector,
    Linker,
    build_connector,
    canonical_linker,
    linker_ham_path,
    ramsey_select,
    verify_connector,
    verify_linker,
)
from .linkbuild import build_linkers, build_single_linker
from .linking import LinkStepResult, link_through, linking_family_step
from .oracle import (
    GeneratorSpec,
    brute_disjoint_paths,
    brute_ham_cycle,
    brute_ham_path,
    generate,
    independence_number,
)
from .pipeline import edge_disjoint_ham_cycles, ham_cycle_from_partition, link_pairs, verify_decomposition
from .profiles import ParamProfile, paper_profile, pipeline_profile
from .report import Certificate, ConstructionError, VerificationReport

__all__ = [name for name in dir() if not name.startswith("_")]
