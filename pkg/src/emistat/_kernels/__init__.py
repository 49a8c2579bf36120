"""Numeric kernel backends.

The compiled extension ``_ckernels`` is preferred when it was built; the
NumPy implementation ``_pykernels`` is the fallback.  Both expose the same
functions and agree to close to machine precision, so everything above this
package is backend-agnostic.  ``EMISTAT_BACKEND=python`` forces the fallback;
``set_backend`` switches at runtime (used by tests and benchmarks).
"""

from __future__ import annotations

import os

from . import _pykernels

try:
    from . import _ckernels
    HAVE_NATIVE = True
except ImportError:
    _ckernels = None
    HAVE_NATIVE = False

_BACKENDS = {"python": _pykernels}
if HAVE_NATIVE:
    _BACKENDS["native"] = _ckernels

_env = os.environ.get("EMISTAT_BACKEND", "").strip().lower()
if _env in _BACKENDS:
    _impl = _BACKENDS[_env]
elif HAVE_NATIVE:
    _impl = _ckernels
else:
    _impl = _pykernels


def backend_name() -> str:
    return _impl.NAME


def available_backends() -> tuple[str, ...]:
    return tuple(sorted(_BACKENDS))


def set_backend(name: str) -> None:
    global _impl
    if name not in _BACKENDS:
        raise ValueError(f"unknown backend {name!r}; available: {available_backends()}")
    _impl = _BACKENDS[name]


def lgamma(x):
    return _impl.lgamma(x)


def gammainc_p(a, x):
    return _impl.gammainc_p(a, x)


def gammainc_q(a, x):
    return _impl.gammainc_q(a, x)


def betainc(a, b, x):
    return _impl.betainc(a, b, x)


def norm_cdf(z):
    return _impl.norm_cdf(z)


def norm_sf(z):
    return _impl.norm_sf(z)


def norm_ppf(q):
    return _impl.norm_ppf(q)


def power_sum(logx, alpha, log_sigma):
    return _impl.power_sum(logx, alpha, log_sigma)


def softplus_sum(logx, beta, log_sigma):
    return _impl.softplus_sum(logx, beta, log_sigma)


def log_shift_sum(x, sigma):
    return _impl.log_shift_sum(x, sigma)
