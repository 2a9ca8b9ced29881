from .field import FieldElement, PrimeField, field_inv, is_probable_prime
from .matrix import DenseMatrix, rref
from .unipoly import UniPoly, field_equation_gcd, roots_int, uni_roots

__all__ = [
    "DenseMatrix",
    "FieldElement",
    "PrimeField",
    "UniPoly",
    "field_equation_gcd",
    "field_inv",
    "is_probable_prime",
    "roots_int",
    "rref",
    "uni_roots",
]
