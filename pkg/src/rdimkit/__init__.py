"""Exact representation dimension of finite groups and checks of the bounds on it."""

from __future__ import annotations

__version__ = "0.1.0"

from .chartab import CharTable, character_table
from .corpus import build, corpus_entry, standard_corpus
from .group import Group, GroupSpec, load_group
from .solver import brute_force_rdim, build_cover, rdim, rdim_abelian, rdim_pgroup, solve_rdim

__all__ = [
    "CharTable", "Group", "GroupSpec", "brute_force_rdim", "build", "build_cover", "character_table",
    "corpus_entry", "load_group", "rdim", "rdim_abelian", "rdim_pgroup", "solve_rdim", "standard_corpus",
]
