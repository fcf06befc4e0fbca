"""Exact mechanisms for two-obnoxious-facility location on [0,1].

Everything is computed in exact rational arithmetic; see the project README
for the model, the mechanisms M1-M4 and the verification tooling.
"""

from obfloc._obfloc import *  # noqa: F401,F403
from obfloc._obfloc import __doc__  # noqa: F401

__version__ = "0.1.0"
