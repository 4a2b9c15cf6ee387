"""Sumsets, isoperimetric connectivity and small-sumset structure in finite abelian groups.

Groups are factor lists such as [2, 6]. Elements are digit tuples or indices.
Sets are lists of elements or "0x..." masks.
"""

import json

from . import _core
from ._core import Error, HypothesisError, abelian_groups, mutation_sites, theorems

__all__ = [
    "Error",
    "HypothesisError",
    "abelian_groups",
    "classify",
    "degeneracy",
    "hyper_atom",
    "kappa",
    "minimize",
    "mutation_sites",
    "normalize",
    "period",
    "subgroups",
    "sumset",
    "super_atom",
    "theorems",
    "verify",
]


def _j(x):
    return json.dumps(x)


def sumset(group, a, b):
    return json.loads(_core.sumset(_j(group), _j(a), _j(b)))


def period(group, a):
    return json.loads(_core.period(_j(group), _j(a)))


def normalize(group, a):
    return json.loads(_core.normalize(_j(group), _j(a)))


def kappa(group, s, k=1, mode="auto", fragments=True):
    return json.loads(_core.kappa(_j(group), _j(s), k, mode, fragments))


def degeneracy(group, s, mode="auto"):
    return json.loads(_core.degeneracy(_j(group), _j(s), mode))


def hyper_atom(group, s, mode="auto"):
    return json.loads(_core.hyper_atom(_j(group), _j(s), mode))


def super_atom(group, s, mode="auto"):
    return json.loads(_core.super_atom(_j(group), _j(s), mode))


def subgroups(group):
    return json.loads(_core.subgroups(_j(group)))


def _instance(group, s, t, mu):
    inst = {"group": group, "S": s, "mu": mu}
    if t is not None:
        inst["T"] = t
    return _j(inst)


def classify(theorem, group, s, t=None, mu=0, mode="auto"):
    return json.loads(_core.classify(theorem, _instance(group, s, t, mu), mode))


def verify(theorem, **filters):
    """Runs a sweep; keyword filters mirror the CLI options (max_order, groups, seed, ...)."""
    return json.loads(_core.verify(theorem, _j(filters)))


def minimize(theorem, group, s, t=None, mu=0, mode="auto"):
    return json.loads(_core.minimize(theorem, _instance(group, s, t, mu), mode))
