"""cohortdrift: selection-bias tracking for exploratory cohort construction
over hierarchically coded event data."""

__version__ = "0.1.0"
