"""Batch-size-schedule toolkit for one-pass SGD on power-law regression.

Thin wrapper over the compiled extension; everything public lives in
``bsskit._bsskit``.
"""

from ._bsskit import *  # noqa: F401,F403
from ._bsskit import __doc__  # noqa: F401
