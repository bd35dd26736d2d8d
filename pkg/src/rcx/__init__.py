"""Exact arithmetic in a real closed field of generalised power series with a
base-2 exponential, integer parts and development triples."""

from .development import (
    Development,
    Triple,
    dev_compute,
    ladder_triple,
    triple_check_maximal,
    triple_extend,
    triple_from_basis,
    trivial_triple,
)
from .errors import RcxError
from .evaluate import EvalEnv, eval_expr, eval_text
from .exp import (
    ChainState,
    GadgetSpec,
    chain_run,
    dyadic_check,
    exp_series,
    gadget_build,
    log_series,
)
from .intpart import IpElement, ip_exp, ip_floor, ip_verify
from .monomial import (
    GroupRegistry,
    Monomial,
    grp_init_ladder,
    grp_lookup,
    grp_new_generator,
    mono_compare,
    mono_log,
    mono_mul,
    mono_pow,
)
from .parser import ExprSyntaxError, parse_expr, print_expr
from .residue import RealAlg, ra_arith, ra_compare, ra_floor, ra_odd_root_of_poly, ra_pow2, ra_root
from .series import (
    Series,
    ser_add,
    ser_inv,
    ser_mul,
    ser_root,
    ser_sign,
    ser_split,
    ser_truncate,
    ser_valuation,
)

__version__ = "0.1.0"
