"""gdsl: a parametric sewing-pattern engine with an agent-driven design loop."""

__version__ = "0.1.0"
