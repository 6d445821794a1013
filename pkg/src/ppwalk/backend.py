"""Walker backend selection: compiled extension if present, numpy otherwise.

Set ``PPWALK_BACKEND=python`` or ``compiled`` to force a choice (the benchmark
and the parity tests import both modules directly regardless).
"""

from __future__ import annotations

import os

from . import _walkers_py

_forced = os.environ.get("PPWALK_BACKEND")

if _forced == "python":
    _active = _walkers_py
else:
    try:
        from . import _walkers as _compiled
        _active = _compiled
    except ImportError:
        if _forced == "compiled":
            raise ImportError(
                "PPWALK_BACKEND=compiled but the ppwalk._walkers extension "
                "is not built; reinstall with a C compiler available"
            )
        _active = _walkers_py

BACKEND = _active.BACKEND_NAME


def get():
    """Active walker module (compiled or python)."""
    return _active


def available():
    """Importable walker modules keyed by backend name."""
    mods = {_walkers_py.BACKEND_NAME: _walkers_py}
    try:
        from . import _walkers as compiled
        mods[compiled.BACKEND_NAME] = compiled
    except ImportError:
        pass
    return mods
