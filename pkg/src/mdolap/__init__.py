"""mdolap: an in-memory multidimensional database engine.

Facts and multi-hierarchy dimensions form a constellation; semantic
constraints between hierarchies (exclusion, inclusion, simultaneity,
totality, partition) are checked with witnesses and drive constraint-aware
pivot operators (Display, DrillDown, RollUp, HRotate, DRotate).
"""

from . import algebra, constraints, dsl, engine, ingest, model, render, service

__all__ = [
    "algebra",
    "constraints",
    "dsl",
    "engine",
    "ingest",
    "model",
    "render",
    "service",
]

__version__ = "0.1.0"
