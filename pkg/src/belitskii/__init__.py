"""Belitskii canonical forms of linear time-invariant systems over Q(i)."""
