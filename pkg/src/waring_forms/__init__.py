"""Exact Waring ranks of binary forms and the strata of suprageneric rank."""

from .apolarity import (
    apolar_pair,
    border_rank,
    catalecticant,
    decompose,
    waring_rank,
)
from .binpoly import BinaryForm, LinearForm, format_form, parse_form
from .errors import WaringError
from .scalar import QQ, PrimeField, parse_field

__version__ = "0.1.0"

__all__ = [
    "BinaryForm",
    "LinearForm",
    "PrimeField",
    "QQ",
    "WaringError",
    "apolar_pair",
    "border_rank",
    "catalecticant",
    "decompose",
    "format_form",
    "parse_field",
    "parse_form",
    "waring_rank",
]
