"""Exact lacunary sums, divergence certificates and Trotter-projection simulation."""
from .extprec import extended, ext, to_decimal, from_decimal
from .lacunary_core import (
    cn_hilbert,
    cn_lp,
    cn_hilbert_subseq_pow2,
    cn_hilbert_subseq_3pow2,
    cn_lp_subseq_pow2,
    cn_lp_subseq_3pow2,
    certify_divergence,
    subsequence_scan,
    bound_constants,
)
from .operator_sim import (
    trotter_iterate,
    rank_one_reduction,
    convergence_probe,
    positive_control,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "extended",
    "ext",
    "to_decimal",
    "from_decimal",
    "cn_hilbert",
    "cn_lp",
    "cn_hilbert_subseq_pow2",
    "cn_hilbert_subseq_3pow2",
    "cn_lp_subseq_pow2",
    "cn_lp_subseq_3pow2",
    "certify_divergence",
    "subsequence_scan",
    "bound_constants",
    "trotter_iterate",
    "rank_one_reduction",
    "convergence_probe",
    "positive_control",
]
