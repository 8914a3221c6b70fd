"""Kernel selection: compiled Cython twin when available, pure otherwise.

Set EQUIMAP_PURE=1 to force the pure kernel (used by the benchmark and by
tests that compare the twins).
"""

import os

if os.environ.get("EQUIMAP_PURE") == "1":
    from . import _pykernel as impl
else:
    try:
        from . import _cykernel as impl  # type: ignore[attr-defined]
    except ImportError:
        from . import _pykernel as impl

KERNEL_NAME = impl.KERNEL_NAME

c_norm = impl.c_norm
c_is_zero = impl.c_is_zero
c_neg = impl.c_neg
c_add = impl.c_add
c_sub = impl.c_sub
c_mul = impl.c_mul
vec_axpy = impl.vec_axpy
row_scale = impl.row_scale
row_mul_elementwise = impl.row_mul_elementwise
rref = impl.rref
poly_mul = impl.poly_mul
poly_divmod_monic = impl.poly_divmod_monic
subst_cols = impl.subst_cols
table_close = impl.table_close
