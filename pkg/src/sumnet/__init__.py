"""Linear network coding for sum-networks over finite fields."""

from .coding import (
    DecoderSpec,
    LinearCode,
    TransferVector,
    Undecodable,
    all_ones_decoder,
    identity_code,
    propagate,
    solve_decoders,
    transfer,
    verify_sum_code,
)
from .feasibility import (
    BudgetExceeded,
    CharacteristicSet,
    FeasibilityVerdict,
    analytic_charset,
    brute_force_feasible,
    charset_intersect,
    cross_validate,
    prime_factors,
    s_network_charset,
)
from .field import (
    FieldElement,
    FieldMatrix,
    FieldSpec,
    fe_add,
    fe_inv,
    fe_mul,
    fe_neg,
    field_make,
    mat_inv,
    mat_mul,
    parse_field,
    solve_linear,
)
from .network import (
    Network,
    all_pairs_connected,
    build_complete_bipartite,
    build_s_network,
    crisscross,
    deserialize,
    export_dot,
    parse_netspec,
    realize,
    serialize,
    topo_order,
)

__version__ = "0.1.0"
