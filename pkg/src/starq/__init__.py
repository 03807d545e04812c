"""Projectively equivariant quantization and the canonical invariant star-product."""
from .symbols import GradedPart, Scalar, SymbolPoly, arith, euler, grade, poisson, scalar
from .parsing import ParseError, format_symbol, parse_symbol
from .quantization import DiffOpSymbol, compose, dequantize, quantize, star_quant
from .explicit import coeff_B, star_explicit
from .hochschild import star_commutator

__version__ = "0.1.0"

__all__ = [
    "DiffOpSymbol",
    "GradedPart",
    "ParseError",
    "Scalar",
    "SymbolPoly",
    "arith",
    "coeff_B",
    "compose",
    "dequantize",
    "euler",
    "format_symbol",
    "grade",
    "parse_symbol",
    "poisson",
    "quantize",
    "scalar",
    "star_commutator",
    "star_explicit",
    "star_quant",
]
