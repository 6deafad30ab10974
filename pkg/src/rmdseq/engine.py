"""Kernel engine selection.

The hot loops (per-byte walk, chunked codeword decode) exist twice: a
compiled Cython module ``_kernels_c`` and a pure-Python twin
``_kernels_py`` with the same handle-based interface.  ``auto`` prefers
the compiled one and falls back silently; forcing ``c`` raises if the
extension did not build.
"""

from __future__ import annotations

from .errors import ConfigurationError


def get_engine(name="auto"):
    if name in ("auto", "c"):
        try:
            from . import _kernels_c

            return _kernels_c
        except ImportError:
            if name == "c":
                raise ConfigurationError(
                    "compiled kernels unavailable; reinstall with build tools "
                    "or use engine='py'"
                )
    if name in ("auto", "py"):
        from . import _kernels_py

        return _kernels_py
    raise ConfigurationError(f"unknown engine {name!r}; pick auto, c or py")


def active_engine_name():
    return get_engine("auto").ENGINE


def available_engines():
    names = []
    try:
        from . import _kernels_c  # noqa: F401

        names.append("c")
    except ImportError:
        pass
    names.append("py")
    return names
