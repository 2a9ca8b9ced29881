from .groebner import (
    buchberger,
    interreduce,
    is_generic_coordinates_small,
    is_groebner,
    minimalize,
    quotient_basis,
    reduce,
    spoly,
)
from .poly import (
    DRL,
    LEX,
    Monomial,
    MPoly,
    PolyRing,
    PolySystem,
    TermOrder,
    compare_monomials,
    format_poly,
    parse_poly,
    top_component,
)

__all__ = [
    "DRL",
    "LEX",
    "MPoly",
    "Monomial",
    "PolyRing",
    "PolySystem",
    "TermOrder",
    "buchberger",
    "compare_monomials",
    "format_poly",
    "interreduce",
    "is_generic_coordinates_small",
    "is_groebner",
    "minimalize",
    "parse_poly",
    "quotient_basis",
    "reduce",
    "spoly",
    "top_component",
]
