"""Quantum image processing on a dense statevector simulator."""
from .codec import (
    FLATTEN_ORDER,
    FrqiEncoding,
    ImageBuffer,
    NeqrEncoding,
    QpieEncoding,
    frqi_encode,
    frqi_estimate,
    neqr_encode,
    neqr_retrieve,
    qpie_encode,
    qpie_estimate,
)
from .edges import EdgeMap, Method, detect_backward, detect_central, detect_from_shots, edge_image
from .errors import CorruptHistogramError, DomainError, ParseError, ResourceError
from .formats import read_idx_images, read_pgm, write_pgm
from .similarity import SimilarityResult, build_swap_test, compare, compare_edges
from .statevector import (
    ShotHistogram,
    StateVector,
    apply_controlled_swap,
    apply_hadamard,
    apply_shift,
    apply_swap,
    inner_product,
    measure_qubit,
    sample,
    tensor,
)

__version__ = "0.1.0"
