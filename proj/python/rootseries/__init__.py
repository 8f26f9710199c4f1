"""Taylor series of zeros of a base function plus a complex-exponent polynomial."""

try:
    from ._rootseries import *  # noqa: F401,F403
except ImportError:  # in-tree builds put the extension on sys.path directly
    from _rootseries import *  # noqa: F401,F403
