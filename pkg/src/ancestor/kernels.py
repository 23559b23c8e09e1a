"""Kernel backend selection.

The compiled extension ``ancestor._kernels`` is used when it has been built;
otherwise the pure-Python twin ``ancestor._kernels_py`` is used.  Both expose
the same functions and produce identical results.  Setting
``ANCESTOR_BACKEND=python`` forces the fallback.
"""
from __future__ import annotations

import os

if os.environ.get("ANCESTOR_BACKEND", "").lower() == "python":
    from . import _kernels_py as _impl

    BACKEND = "python"
else:
    try:
        from . import _kernels as _impl

        BACKEND = "cython"
    except ImportError:  # pragma: no cover - depends on the build
        from . import _kernels_py as _impl

        BACKEND = "python"

mono_mul = _impl.mono_mul
mono_derive = _impl.mono_derive
poly_add_into = _impl.poly_add_into
poly_mul = _impl.poly_mul
poly_apply = _impl.poly_apply
wick_term = _impl.wick_term
op_product = _impl.op_product
op_commutator = _impl.op_commutator
ann_degree = _impl.ann_degree
