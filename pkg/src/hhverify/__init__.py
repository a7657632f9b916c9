"""Certified classification of planar linear systems with fat base points."""
from __future__ import annotations

from .linsys import LinearSystem, expected_dimension, virtual_dimension
from .game import Board, Strategy, replay, search
from .cremona import classify_empty_by_base_overload, classify_special_by_neg_curve, cremona_step, default_catalog
from .oracle import OracleConfig, OracleVerdict, dimension
from .degeneration import D, S, DegenerationSplit, emptiness_by_degeneration, table1_rows
from .pipeline import CensusFilter, Classifier, Toolbox, Verdict, census, classify, enumerate_systems
from .table2 import TABLE2, verify_table2

__all__ = [
    "Board",
    "CensusFilter",
    "Classifier",
    "D",
    "DegenerationSplit",
    "LinearSystem",
    "OracleConfig",
    "OracleVerdict",
    "S",
    "Strategy",
    "TABLE2",
    "Toolbox",
    "Verdict",
    "census",
    "classify",
    "classify_empty_by_base_overload",
    "classify_special_by_neg_curve",
    "cremona_step",
    "default_catalog",
    "dimension",
    "emptiness_by_degeneration",
    "enumerate_systems",
    "expected_dimension",
    "replay",
    "search",
    "table1_rows",
    "verify_table2",
    "virtual_dimension",
]
