"""Classification of planar quadratic maps up to affine equivalence.

Coefficient order everywhere: a20, a11, a02, a10, a01, a00,
b20, b11, b02, b10, b01, b00 (monomials x^2, xy, y^2, x, y, 1 per component).
Affine maps are (m11, m12, m21, m22, t1, t2).
"""

from ._quadmap import (
    NotApplicableError,
    NotInvertibleError,
    NotQuadraticError,
    SpecParseError,
    VerificationError,
    critical_set_class_of,
    distinguishing_invariant,
    labels,
    normal_form,
    report_json,
    run_acceptance,
    smooth_class_of,
)
from . import _quadmap

COEFF_KEYS = ("a20", "a11", "a02", "a10", "a01", "a00",
              "b20", "b11", "b02", "b10", "b01", "b00")


def coeffs(m):
    """Coerce a map given as a 12-sequence or a {coefficient: value} dict."""
    if isinstance(m, dict):
        unknown = set(m) - set(COEFF_KEYS)
        if unknown:
            raise SpecParseError("unknown coefficient keys: %s" % sorted(unknown))
        return [float(m.get(k, 0.0)) for k in COEFF_KEYS]
    return list(m)


def classify(m):
    return _quadmap.classify(coeffs(m))


def verify_witness(m, label, h, k):
    return _quadmap.verify_witness(coeffs(m), label, h, k)


def compose(k, m, h):
    return _quadmap.compose(k, coeffs(m), h)


def evaluate(m, x, y):
    return _quadmap.evaluate(coeffs(m), x, y)


def preimage_count(m, x, y):
    return _quadmap.preimage_count(coeffs(m), x, y)


def preimage_profile(m, n=240, seed=1):
    return _quadmap.preimage_profile(coeffs(m), n, seed)


def critical_set_class(m):
    return _quadmap.critical_set_class(coeffs(m))


def quadratic_inverse(m):
    return _quadmap.quadratic_inverse(coeffs(m))


def injective_on_critical_set(m):
    return _quadmap.injective_on_critical_set(coeffs(m))

__all__ = [
    "NotApplicableError",
    "NotInvertibleError",
    "NotQuadraticError",
    "SpecParseError",
    "VerificationError",
    "classify",
    "compose",
    "critical_set_class",
    "critical_set_class_of",
    "distinguishing_invariant",
    "evaluate",
    "injective_on_critical_set",
    "labels",
    "normal_form",
    "preimage_count",
    "preimage_profile",
    "quadratic_inverse",
    "report_json",
    "run_acceptance",
    "smooth_class_of",
    "verify_witness",
]
