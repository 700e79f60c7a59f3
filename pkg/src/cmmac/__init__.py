"""Co-membership-based ranking of anomalous communities (CMMAC)."""

__version__ = "0.1.0"
