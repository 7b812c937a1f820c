"""Recovering-rate comparison across code shapes.

For each (n, k, delta) and window delay j the table shows the fraction
of a window the decoder can afford to lose: plain forward decoding over
windows of j+1 blocks, then the guard variants whose windows also carry
mu (generator side) or nu (parity side) blocks of history.  A dash
means the memory in question is not integral for that shape.
"""

from convec.codec import recovering_rates

SHAPES = [
    (2, 1, 1, 2),
    (2, 1, 3, 6),
    (3, 1, 1, 1),
    (3, 1, 18, 27),
    (3, 2, 18, 27),
    (5, 2, 2, 1),
    (5, 3, 3, 3),
]

print(f"{'(n,k,delta)':>12} {'j':>3} {'forward':>9} {'guard_G':>9} {'guard_H':>9}")
for n, k, delta, j in SHAPES:
    table = recovering_rates(n, k, delta, j)
    cells = [str(table[key]) if key in table else "-"
             for key in ("forward", "guard_G", "guard_H")]
    print(f"{f'({n},{k},{delta})':>12} {j:>3} "
          f"{cells[0]:>9} {cells[1]:>9} {cells[2]:>9}")

print("\nat rate 1/2 the two guard columns always agree:")
for delta in (1, 2, 3):
    table = recovering_rates(2, 1, delta, 4)
    g, h = table["guard_G"], table["guard_H"]
    print(f"  (2,1,{delta}) j=4: guard_G = {g}, guard_H = {h}, "
          f"equal as rationals: {g.fraction == h.fraction}")
