"""Approximate quantum one-time pads built from small-bias sets.

The package has three layers.  `gf2` and `smallbias` provide the classical
combinatorics: binary fields, Walsh bias certification, and the explicit
set constructions.  `qcore` and `pauli` provide the quantum side: density
matrices with a self-contained eigensolver, Pauli and prime-dimension
Weyl operator algebra, and the exact channel primitives.  `schemes` wires
them into three concrete encryption schemes whose information-theoretic
security bounds are checked by brute-force simulation, and `cli` exposes
the whole pipeline as the `qpad` command.

Two interchangeable kernel backends exist; `BACKEND` names the active one
and the QPAD_BACKEND environment variable picks at import time.
"""

from ._kernels import BACKEND, available_backends
from .errors import EigensolverError, InvalidStateError, QpadError, ResourceLimitError
from .gf2 import Bits, FieldElement, FieldSpec, find_irreducible, gf_mul, gf_pow, is_irreducible
from .pauli import PauliOp, QuditOp, conjugate_pauli, conjugate_qudit, pauli_mul, qudit_mul
from .qcore import (
    ClassicalQuantumState,
    DensityMatrix,
    cq_purity,
    cq_trace_distance_uniform,
    distinguish_advantage,
    purity,
    purity_distance_bound,
    random_mixed_density,
    random_pure_density,
    read_state,
    renyi2,
    trace_distance,
    write_state,
)
from .schemes import (
    Ciphertext,
    Key,
    SchemeAConfig,
    SchemeBConfig,
    SchemeCConfig,
    adversarial_states,
    key_length_table,
    scheme_a_channel,
    scheme_a_decrypt,
    scheme_a_encrypt,
    scheme_a_keygen,
    scheme_b_channel,
    scheme_b_decrypt,
    scheme_b_encrypt,
    scheme_b_keygen,
    scheme_c_channel,
    scheme_c_decrypt,
    scheme_c_encrypt,
    scheme_c_keygen,
)
from .smallbias import (
    BiasReport,
    SetFamily,
    SmallBiasSet,
    aghp_set,
    all_subspaces_family,
    bias_vector,
    certify_bias,
    certify_family_bias,
    exhaustive_best_set,
    explicit_set,
    full_space_set,
    linear_family,
    read_set,
    singleton_family,
    write_set,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "BiasReport",
    "Bits",
    "Ciphertext",
    "ClassicalQuantumState",
    "DensityMatrix",
    "EigensolverError",
    "FieldElement",
    "FieldSpec",
    "InvalidStateError",
    "Key",
    "PauliOp",
    "QpadError",
    "QuditOp",
    "ResourceLimitError",
    "SchemeAConfig",
    "SchemeBConfig",
    "SchemeCConfig",
    "SetFamily",
    "SmallBiasSet",
    "adversarial_states",
    "aghp_set",
    "all_subspaces_family",
    "available_backends",
    "bias_vector",
    "certify_bias",
    "certify_family_bias",
    "conjugate_pauli",
    "conjugate_qudit",
    "cq_purity",
    "cq_trace_distance_uniform",
    "distinguish_advantage",
    "exhaustive_best_set",
    "explicit_set",
    "find_irreducible",
    "full_space_set",
    "gf_mul",
    "gf_pow",
    "is_irreducible",
    "key_length_table",
    "linear_family",
    "pauli_mul",
    "purity",
    "purity_distance_bound",
    "qudit_mul",
    "random_mixed_density",
    "random_pure_density",
    "read_set",
    "read_state",
    "renyi2",
    "scheme_a_channel",
    "scheme_a_decrypt",
    "scheme_a_encrypt",
    "scheme_a_keygen",
    "scheme_b_channel",
    "scheme_b_decrypt",
    "scheme_b_encrypt",
    "scheme_b_keygen",
    "scheme_c_channel",
    "scheme_c_decrypt",
    "scheme_c_encrypt",
    "scheme_c_keygen",
    "singleton_family",
    "trace_distance",
    "write_set",
    "write_state",
    "__version__",
]
