#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Examples demonstrating the omegapy toolkit

Builds the functions f, g and h, computes their moduli of continuity by
the grid oracle and by the closed form, and runs a few of the checks.
"""
# %%
from fractions import Fraction

import numpy as np
from prettytable import PrettyTable
from omegapy import (build_f, build_g, build_h, cantor_eval, cantor_exact, critical_set,
                     find_delta_star, increment_sum, modulus_grid, omega_g_closed, singular_cover,
                     ac_profile, omega_g_table, substitute_pair, check_lemma_bounds)

print("=" * 70)
print("omegapy Examples - moduli of continuity")
print("=" * 70)

# %%
# ============================================================================
# Example 01: The Cantor function
# ============================================================================
print("\n[Example 01] Cantor function at ternary points")
print("-" * 70)
for x in (0.25, 1.0 / 3.0, 2.0 / 3.0, 0.9):
    print(f"  f1({x:.6f}) = {cantor_eval(x):.15g}")
# the float 1/3 sits just below 1/3; the rational itself:
for x in (Fraction(1, 3), Fraction(2, 3 ** 10)):
    print(f"  f1({x}) = {cantor_exact(x)}")

# %%
# ============================================================================
# Example 02: f and g share one modulus
# ============================================================================
print("\n[Example 02] Grid moduli of f and g on [0, 7]")
print("-" * 70)
f, g = build_f(), build_g()
table_f = modulus_grid(f, 4001)
table_g = modulus_grid(g, 4001)
print(f"  max |omega_f - omega_g| = {np.max(np.abs(table_f.values - table_g.values)):.3e}")

# %%
# ============================================================================
# Example 03: Closed form against the grid
# ============================================================================
print("\n[Example 03] Closed form of omega_g")
print("-" * 70)
star = find_delta_star()
print(f"  delta* = {star:.15g}")
table = PrettyTable(["delta", "closed form", "grid"])
for delta in (0.1, 0.5, 1.0, 1.0 + star, 2.5, 6.5, 7.0):
    table.add_row([f"{delta:.4f}", f"{omega_g_closed(delta):.6f}", f"{table_g.value(delta):.6f}"])
print(table)

cs = critical_set(3.0)
print(f"  critical set at delta = 3: points {cs.points}, flat {[(c.lo, c.hi) for c in cs.flat_components]}")

# %%
# ============================================================================
# Example 04: Substitution out of the Cantor block
# ============================================================================
print("\n[Example 04] Pairs moved out of [2, 3]")
print("-" * 70)
for x, y in ((2.5, 0.5), (2.5, 2.5), (2.2, 4.7)):
    print(f"  ({x}, {y}) -> {substitute_pair(x, y)}")

# %%
# ============================================================================
# Example 05: Singular covers versus absolute continuity
# ============================================================================
print("\n[Example 05] f is singular, omega_g is not")
print("-" * 70)
for level in (0, 4, 8, 12):
    cover = singular_cover(level)
    print(f"  level {level:2d}: length {cover.total_length:.3e}  "
          f"f gains {increment_sum(f, cover):.6f}  g gains {increment_sum(g, cover):.3e}")
for length, sup in ac_profile(omega_g_table(4001), trials=50):
    print(f"  omega_g increments over total length {length:g}: at most {sup:.4e}")

# %%
# ============================================================================
# Example 06: A non-monotone function
# ============================================================================
print("\n[Example 06] h on [0, 2]")
print("-" * 70)
table_h = modulus_grid(build_h(), 2001)
for delta in (0.25, 0.5, 1.0, 1.5):
    print(f"  omega_h({delta}) = {table_h.value(delta):.6f}")

# %%
print("\n[Example 07] Pointwise bounds")
print("-" * 70)
for report in check_lemma_bounds(10_000):
    print(f"  {report.check_name:24s} {'ok' if report.passed else 'FAILED'}")
