"""Select the compiled core when available, else the numpy fallback.

Set ``DESITTER_BACKEND=python`` to force the fallback, e.g. to compare the
two implementations or to run without a C compiler.
"""

import os

from . import _core_py

NAME = "python"
core = _core_py

if os.environ.get("DESITTER_BACKEND", "").lower() != "python":
    try:
        from . import _core  # type: ignore[attr-defined]
    except ImportError:
        pass
    else:
        core = _core
        NAME = "compiled"


def get(name=None):
    """Return the core module by name (``"compiled"`` or ``"python"``)."""
    if name is None:
        return core
    if name == "python":
        return _core_py
    if name == "compiled":
        from . import _core  # type: ignore[attr-defined]

        return _core
    raise ValueError(f"unknown backend {name!r}")
