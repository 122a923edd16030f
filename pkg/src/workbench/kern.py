"""Kernel selection: compiled Cython extension if present, else pure Python."""

try:
    from . import _kern as _impl
    COMPILED = True
except ImportError:            # pragma: no cover - depends on build env
    from . import _kern_py as _impl
    COMPILED = False

matmul = _impl.matmul
row_reduce = _impl.row_reduce


def backend_name():
    return "compiled" if COMPILED else "pure-python"
