"""Orbits of symmetric subgroups and real forms on flag varieties."""
