"""Finite fields, dense polynomials and irreducible-polynomial constructions."""

from .field import ExtensionField, Field, FieldElement, FieldMismatchError, PrimeField
from .irreducible import (
    GF,
    IrreducibleSearchError,
    embed,
    extension_field,
    field_of_order,
    find_trace_one,
    format_modulus,
    irr_poly_char2,
    irr_poly_randomized,
    parse_modulus,
    trace,
    trace_recursion,
)
from .poly import (
    DensePoly,
    berlekamp_factor_count,
    is_irreducible,
    is_irreducible_berlekamp,
    is_irreducible_trial,
    poly_gcd,
)

__all__ = [
    "DensePoly",
    "ExtensionField",
    "Field",
    "FieldElement",
    "FieldMismatchError",
    "GF",
    "IrreducibleSearchError",
    "PrimeField",
    "berlekamp_factor_count",
    "embed",
    "extension_field",
    "field_of_order",
    "find_trace_one",
    "format_modulus",
    "irr_poly_char2",
    "irr_poly_randomized",
    "is_irreducible",
    "is_irreducible_berlekamp",
    "is_irreducible_trial",
    "parse_modulus",
    "poly_gcd",
    "trace",
    "trace_recursion",
]
