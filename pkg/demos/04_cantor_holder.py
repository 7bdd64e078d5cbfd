"""Cantor subsets with forced digits and the digit-deleting Hoelder map.

Run: python demos/04_cantor_holder.py
"""

from schneider_lab import CantorSpec, PsiSpec, holder_check, holder_map, sample_point
from schneider_lab.cantor import cover_report
from schneider_lab.streams import block_rng

spec = CantorSpec.empsi(2, 2, PsiSpec.sqrt(), depth=64)
pairs, x = sample_point(spec, 64, block_rng(0, 0))
print("forced digits at 2^k:", [pairs[2**k - 1].a for k in range(1, 7)])
image = holder_map(pairs, spec.marked_positions())
print(f"after deleting them: {len(image)} pairs, max a = {max(q.a for q in image)}")

print("cover of E_2(sqrt) at p=2 (n, count, s_n):")
for row in cover_report(spec, (4, 8, 16, 32, 64)):
    print(f"  {row['n']:>3} {row['count']:>22} {row['s_n']:.4f}")

r = holder_check(CantorSpec.empsi(2, 2, PsiSpec.sqrt(), 128), 0.5, pairs_count=300, depth=128, seed=1)
st = r.statistics
print(f"Hoelder check: {int(st['violations'])} violations in {int(st['tested pairs'])} pairs; "
      f"observed exponents mean {st['mean exponent']:.3f}, min {st['min exponent']:.3f}, "
      f"proof exponent {st['exponent bound']:.3f}")

fnk = CantorSpec.fnk(3, 2, 0.5, depth=720)
pairs, _ = sample_point(fnk, 720, block_rng(1, 0))
print("F(n_k, 1/2, 2) at p=3: a_n/n at n_k =",
      [round(pairs[n - 1].a / n, 4) for n in fnk.marked_positions()])
