"""Decisiveness analysis for probabilistic counter machines.

Each analysis takes the model source text and returns the same report the
command line prints with ``--json``, decoded into a dict.
"""

import json

from . import _core
from ._core import BudgetExhausted, DomainError, Error, ParseError, UnsupportedError, normalize_text, run

__all__ = [
    "BudgetExhausted",
    "DomainError",
    "Error",
    "ParseError",
    "UnsupportedError",
    "check",
    "crp",
    "decide",
    "normalize_text",
    "rq",
    "run",
    "simulate",
]


def check(text):
    return json.loads(_core.check(text))


def rq(text):
    return json.loads(_core.rq(text))


def decide(text, bound=None):
    return json.loads(_core.decide(text, bound))


def crp(text, theta, step_cap=None, oracle="auto"):
    return json.loads(_core.crp(text, str(theta), step_cap, oracle))


def simulate(text, trials, horizon, seed=0, threads=1):
    return json.loads(_core.simulate(text, trials, horizon, seed, threads))
