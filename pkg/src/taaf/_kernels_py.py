"""Pure-Python (numpy) batch kernels: the fallback behind ``kernels``.

Same buffer-level interface as the compiled extension, implemented with
the catalog's vectorized forms.  Overflow warnings are suppressed and
infinities clipped to +/-max-float, matching the saturation convention.
"""

from __future__ import annotations

import numpy as np

from . import catalog

_MAX = catalog.MAX_FLOAT

_VALUE_BY_CODE = {}
_DERIV_BY_CODE = {}
_PARAM_BY_CODE = {}
for _fid in catalog.ids():
    _code = catalog.kernel_code(_fid)
    _VALUE_BY_CODE[_code] = catalog.np_value_fn(_fid)
    _DERIV_BY_CODE[_code] = catalog.np_deriv_fn(_fid)
    _desc = catalog.describe(_fid)
    _PARAM_BY_CODE[_code] = _desc.fixed_params[0].name if _desc.fixed_params else None


def _apply(table, code, p, z):
    fn = table[code]
    pname = _PARAM_BY_CODE[code]
    with np.errstate(over="ignore", invalid="ignore"):
        out = fn(z, **{pname: p}) if pname else fn(z)
        return np.clip(out, -_MAX, _MAX)


def value_buffer(code, p, z, out):
    out[:] = _apply(_VALUE_BY_CODE, code, p, z)


def deriv_buffer(code, p, z, out):
    out[:] = _apply(_DERIV_BY_CODE, code, p, z)


def taaf_value_buffer(alpha, beta, gamma, delta, code, p, z, out):
    u = beta * z + gamma
    with np.errstate(over="ignore", invalid="ignore"):
        out[:] = np.clip(alpha * _apply(_VALUE_BY_CODE, code, p, u) + delta, -_MAX, _MAX)


def checksum_value(code, p, z):
    return float(np.sum(_apply(_VALUE_BY_CODE, code, p, z)))


def checksum_taaf(alpha, beta, gamma, delta, code, p, z):
    out = np.empty_like(z)
    taaf_value_buffer(alpha, beta, gamma, delta, code, p, z, out)
    return float(np.sum(out))
