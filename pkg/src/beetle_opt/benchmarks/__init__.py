"""Objective functions: analytic test functions and RC model identification."""
from .functions import *  # noqa: F401,F403
from .functions import __all__ as _functions_all
from .integrate import rk4_linear_zoh
from .rc import *  # noqa: F401,F403
from .rc import __all__ as _rc_all

__all__ = [*_functions_all, "rk4_linear_zoh", *_rc_all]
