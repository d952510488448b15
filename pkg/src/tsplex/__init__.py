"""Topological signal processing over 2-order simplicial complexes."""

from ._backend import USING_COMPILED_KERNELS
from .analytics import AnalysisReport, analyze, conservative_ranking, histogram, mean_curl, mean_divergence
from .complexes import (
    IncidencePair,
    OrientedComplex,
    build_complex,
    candidate_triangles,
    close_under_inclusion,
    incidence,
    load_complex,
    save_complex,
)
from .joint import (
    JointLearnConfig,
    JointLearnResult,
    learn_joint,
    project_off_gradient,
    select_q_lowest,
    solenoidal_presence,
    sparse_fit,
    triangle_scores,
)
from .signals import SignalMatrix, load_signal_csv, save_signal_csv
from .spectral import (
    HodgeParts,
    HodgeSpectrum,
    curl,
    divergence,
    hodge_decompose,
    inverse_sft,
    laplacians,
    partition_subspaces,
    sft,
    spectrum,
)
from .statistical import (
    NodeSeriesSet,
    TriangleWeights,
    all_triangle_weights,
    cofluctuation_edge_signals,
    learn_statistical,
    pearson_abs_matrix,
    select_top_edges,
    select_top_triangles,
    total_correlation,
    zscore,
    zscore_and_average_weights,
)
from .synthetic import PlantedInstance, gen_complex, gen_edge_signals, gen_planted_instance

__version__ = "0.1.0"
