"""Losing the decoder state to a long burst, then rebuilding it.

A memory-2 code over GF(8) takes a burst too wide for any forward
window.  The decoder gives the burst up as lost, scans ahead for a spot
where a fresh guard space can be rebuilt, and in this instance the
widened guard window reaches back far enough to clear the burst too.
"""

from convec import field
from convec.codec import gm_decode_forward
from convec.polymat import ConvCode, PolyMatrix
from convec.stream import ErasureStream

fld = field(2, 3)
code = ConvCode(2, 1, PolyMatrix.from_packed(
    fld, [[[7, 4]], [[2, 1]], [[1, 3]]]))
u = PolyMatrix.from_packed(
    fld, [[[c]] for c in (3, 3, 2, 7, 3, 7, 7, 1, 5, 6, 2)])
stream = ErasureStream.from_codeword(code.encode(u))
mask = [(), (1,), (1, 2), (1,), (1,), (1, 2), (), (), (), (), (1,), (1,), ()]
for t, positions in enumerate(mask):
    for p in positions:
        stream.blocks[t][p - 1] = None
print(f"burst pattern, {stream.total_erasures} erasures over {len(stream)} blocks")

print("\nwithout the guard scan:")
report = gm_decode_forward(code, stream, guard=False)
print(f"  lost intervals: {report.lost_intervals}")

print("\nwith the guard scan:")
report = gm_decode_forward(code, stream)
for w in report.windows:
    tag = f" [{w.solver}]" if "guard" in w.solver else ""
    print(f"  t={w.t} j={w.j}: {w.outcome}{tag}")
print(f"  lost intervals: {report.lost_intervals}")
assert report.complete and report.message() == u
print("  every block recovered, burst included")
