from .elliptic import (
    EllipticArgs,
    carlson_rd,
    carlson_rf,
    carlson_rj,
    ellip_e,
    ellip_f,
    ellip_pi,
)
from .montecarlo import make_rng, mc_volume
from .quadrature import (
    DEFAULT_SPEC,
    INVERSE_SQRT_BOTH_ENDS,
    SINGULAR_SPEC,
    SMOOTH,
    QuadratureSpec,
    integrate,
)
from .roots import Bracket, find_root

__all__ = [
    "Bracket",
    "DEFAULT_SPEC",
    "EllipticArgs",
    "INVERSE_SQRT_BOTH_ENDS",
    "QuadratureSpec",
    "SINGULAR_SPEC",
    "SMOOTH",
    "carlson_rd",
    "carlson_rf",
    "carlson_rj",
    "ellip_e",
    "ellip_f",
    "ellip_pi",
    "find_root",
    "integrate",
    "make_rng",
    "mc_volume",
]
