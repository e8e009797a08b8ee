"""opsalign: phase-aware domain adaptation for remaining-useful-life regression."""

__version__ = "0.1.0"
