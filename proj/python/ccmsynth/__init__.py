"""Synthesis of contact-aided compliant mechanisms.

Thin wrapper over the compiled core. The extension module is installed
inside this package by the build backend; a plain module on sys.path (the
CMake build tree) works too.
"""

try:
    from ._ccmsynth import *  # noqa: F401,F403
    from ._ccmsynth import __version__  # noqa: F401
except ImportError:  # pragma: no cover - build-tree layout
    from _ccmsynth import *  # noqa: F401,F403
    from _ccmsynth import __version__  # noqa: F401
