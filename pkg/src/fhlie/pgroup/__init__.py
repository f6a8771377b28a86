"""Finite p-groups: the Hausdorff-series groups, a brute-force group engine,
standard series and the associated Lie ring."""
