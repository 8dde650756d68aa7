"""Exact computations in A_D = k[T1..TN]/m^(D+1)."""
