"""Scratch oracle computations; values verified here get frozen into tests."""
import math
import mpmath as mp
import scipy.special as sp
from urllc_admission import *
from urllc_admission.mcs import _carried_bits

mp.mp.dps = 40

print("=== numerics oracles ===")
q3 = mp.quad(lambda t: mp.exp(-t * t / 2) / mp.sqrt(2 * mp.pi), [3, mp.inf])
print("Q(3) quadrature:", mp.nstr(q3, 20), " impl:", repr(q_function(3.0)),
      " rel err:", float(abs(q_function(3.0) - q3) / q3))
for p in (1e-3, 1e-5):
    ndtri = -sp.ndtri(p)
    mine = q_inverse(p)
    print(f"Qinv({p}) scipy={ndtri!r} impl={mine!r} diff={mine-ndtri:.3e} "
          f"roundtrip rel={(q_function(mine)-p)/p:.3e}")
print("Qinv(0.5):", repr(q_inverse(0.5)))

print("\n=== fbl oracles ===")
print("C(10^1.007) =", repr(math.log2(1 + 10 ** 1.007)))
print("V(1) = 3/(4 ln^2 2) =", repr(3 / (4 * math.log(2) ** 2)))
print("1/ln^2 2 =", repr(1 / math.log(2) ** 2))
ip = mqam_mutual_info(Snr(10.0), fit_for(16))
hp = 4 * (1 - mp.mpf("0.658747") * mp.exp(-mp.mpf("0.115521") * 10)
          - mp.mpf("0.117219") * mp.exp(-mp.mpf("1.467927") * 10)
          - mp.mpf("0.224034") * mp.exp(-mp.mpf("0.482023") * 10))
print("I'(10,16) impl:", repr(ip), " mpmath:", mp.nstr(hp, 17))
rg = rate_gaussian_coding(ChannelPoint(Snr(1.0), 1000, 1e-5))
hp_rg = (1 - mp.sqrt(mp.mpf(3) / (4 * mp.log(2) ** 2) / 1000) * mp.mpf(float(-sp.ndtri(1e-5)))
         + mp.log(1000, 2) / 1000)
print("Rg(1,1000,1e-5) impl:", repr(rg), " mpmath:", mp.nstr(hp_rg, 17))
print("throughput(0.4741, 540e3) =", repr(throughput(0.4741, 540e3)))

print("\n=== fit characterization ===")
for order in (4, 16, 64, 256):
    fit = fit_for(order)
    print(f"M={order}: sum(a)={math.fsum(fit.a)!r}  I'(1e-12)={mqam_mutual_info(Snr(1e-12), fit):.3e}")
# I' vs C over dense log grid
worst = None
for order in (4, 16, 64, 256):
    fit = fit_for(order)
    for i in range(8001):
        p = 10 ** (-4 + 8 * i / 8000)
        gap = mqam_mutual_info(Snr(p), fit) - shannon_capacity(Snr(p))
        if worst is None or gap > worst[0]:
            worst = (gap, order, p)
print("max I'-C over grid:", worst)
# rate_mqam monotonicity in P: find first decrease on log grid per (M, eps)
for order in (4, 256):
    for eps in (1e-3, 1e-5):
        fit = fit_for(order)
        prev = None
        first_dec = None
        for i in range(4001):
            p = 10 ** (-4 + 8 * i / 4000)
            r = rate_mqam(ChannelPoint(Snr(p), 35, eps), fit)
            if prev is not None and r <= prev[1] and first_dec is None:
                first_dec = (prev[0], p, prev[1] - r)
            prev = (p, r)
        print(f"M={order} eps={eps}: first grid decrease at P~{first_dec}")

print("\n=== Table 3 / blocklengths (ceiling) ===")
for cat, tag in ((default_catalogue(), "subset"), (full_catalogue(), "full")):
    vals = {e.index: practical_blocklength(256, e) for e in cat}
    print(tag, {i: vals[i] for i in (0, 5, 11, 20, 27) if i in vals})

print("\n=== Table 4 thresholds ===")
for eps in (1e-5, 1e-3):
    row = {}
    for e in default_catalogue():
        row[e.index] = snr_threshold(256, e, eps, tol_db=1e-6)
    print(eps, {i: (None if v is None else round(v, 4)) for i, v in row.items()})

print("\n=== full-catalogue thresholds monotone? ===")
for eps in (1e-5, 1e-3):
    t = build_threshold_table(256, eps, full_catalogue())
    feas = [(e.mcs.index, e.snr_db) for e in t.entries if e.feasible]
    mono = all(b[1] > a[1] for a, b in zip(feas, feas[1:]))
    infeas = [e.mcs.index for e in t.entries if not e.feasible]
    print(f"eps={eps}: feasible={len(feas)} strictly increasing={mono} infeasible={infeas}")
    print("   ", [(i, round(v, 3)) for i, v in feas])

print("\n=== min_blocklength anchors ===")
print("n_min(256, 30dB, 1e-5, 256) =", min_blocklength(256, Snr.from_db(30), 1e-5, fit_for(256)))
print("real bound =", repr(blocklength_bound(256, Snr.from_db(30), 1e-5, fit_for(256))))
print("n_min(256, -5.751dB, 1e-5, 4) =", min_blocklength(256, Snr.from_db(-5.751), 1e-5, fit_for(4)))
print("n_min(8, 60dB, 1e-3, 256) =", min_blocklength(8, Snr.from_db(60), 1e-3, fit_for(256)),
      " carried(2):", _carried_bits(2, Snr.from_db(60), 1e-3, fit_for(256)))

print("\n=== delay crossing / admission ===")
import urllc_admission.qos as q
traffic = TrafficSpec(k=256, tau=1e-3)
con = QosConstraint(d0=1e-3, epsilon0=1e-3)
table = build_threshold_table(256, 1e-3, default_catalogue())
W = 540e3
def adaptive_delay(db):
    ch = select_mcs(Snr.from_db(db), table)
    if ch is None:
        return math.inf
    n = practical_blocklength(256, ch)
    r = rate_mqam(ChannelPoint(Snr.from_db(db), n, 1e-3), fit_for(ch.modulation_order))
    return delay_bound(traffic, throughput(r, W))
lo, hi = -4.0, -3.0
from urllc_admission.numerics import bisect_monotone
cross = bisect_monotone(lambda x: adaptive_delay(x) - 1e-3, lo, hi, tol=1e-7)
print("delay=1ms crossing at dB:", round(cross, 4))
pt = admission_curve(traffic, con, [Snr.from_db(cross)], default_catalogue())[0]
print("admission at crossing:", pt, " vs 540k rel err:", pt.bandwidth_hz / 540e3 - 1)

print("\n=== admission argmin switches (default catalogue) ===")
prev_idx = "start"
grid = [(-8 + i * 0.002) for i in range(0, int(38 / 0.002))]
pts = admission_curve(traffic, con, [Snr.from_db(d) for d in grid], default_catalogue())
for a, b in zip(pts, pts[1:]):
    if a.mcs_index != b.mcs_index:
        print(f"  switch {a.mcs_index} -> {b.mcs_index} between {a.snr_db:.3f} and {b.snr_db:.3f}")
# jumps (relative) at switches vs inside segments
import itertools
max_inside = 0.0
for a, b in zip(pts, pts[1:]):
    if a.mcs_index == b.mcs_index and a.feasible and b.feasible:
        max_inside = max(max_inside, abs(a.bandwidth_hz - b.bandwidth_hz) / b.bandwidth_hz)
print("max relative step inside segments (0.002 dB grid):", max_inside)

print("\n=== full vs subset admission equality ===")
grid2 = [Snr.from_db(-6 + i * 0.5) for i in range(0, 80)]
p5 = admission_curve(traffic, con, grid2, default_catalogue())
p28 = admission_curve(traffic, con, grid2, full_catalogue())
diffs = [(a.snr_db, a.bandwidth_hz, b.bandwidth_hz, b.mcs_index, a.mcs_index)
         for a, b in zip(p5, p28)
         if a.feasible and b.feasible and abs(a.bandwidth_hz - b.bandwidth_hz) > 1e-9 * a.bandwidth_hz]
print("points where full < subset:", len(diffs), diffs[:5])
argmins = sorted({b.mcs_index for b in p28 if b.mcs_index is not None})
print("full-catalogue argmin indices used:", argmins)

print("\n=== rate adaptive vs max-feasible characterization ===")
worst_ratio = 1.0
bad = []
for i in range(0, 401):
    db = -10 + 0.1 * i
    snr = Snr.from_db(db)
    ch = select_mcs(snr, table)
    if ch is None:
        continue
    rates = {}
    for e in default_catalogue():
        n = practical_blocklength(256, e)
        r = rate_mqam(ChannelPoint(snr, n, 1e-3), fit_for(e.modulation_order))
        if n * r >= 256:
            rates[e.index] = r
    sel = rates[ch.index]
    mx = max(rates.values())
    if sel < mx:
        worst_ratio = min(worst_ratio, sel / mx)
        bad.append((round(db, 2), ch.index, max(rates, key=rates.get)))
print("min selected/max ratio:", worst_ratio, " windows:", bad[:3], "...", bad[-3:] if bad else "")
