"""Shared utilities: errors, numerics, metrics and the run ledger."""
