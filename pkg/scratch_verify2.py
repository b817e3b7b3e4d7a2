import math, time
import mpmath as mp
import scipy.special as sp
from urllc_admission import *
from urllc_admission.mcs import _carried_bits

mp.mp.dps = 40
rg = rate_gaussian_coding(ChannelPoint(Snr(1.0), 1000, 1e-5))
hp_rg = (1 - mp.sqrt(mp.mpf(3) / (4 * mp.log(2) ** 2) / 1000) * mp.mpf(float(-sp.ndtri(1e-5)))
         + mp.log(1000, 2) / 1000)
print("Rg(1,1000,1e-5) impl:", repr(rg), " mpmath:", mp.nstr(hp_rg, 17))

# rate_mqam monotone on [0.5, 1e3]? (operating window for the property test)
ok = True
for order in (4, 16, 64, 256):
    fit = fit_for(order)
    for n in (35, 49, 94, 174, 1093):
        for eps in (1e-3, 1e-5):
            prev = None
            for i in range(2001):
                p = 10 ** (math.log10(0.5) + (3 - math.log10(0.5)) * i / 2000)
                r = rate_mqam(ChannelPoint(Snr(p), n, eps), fit)
                if prev is not None and r <= prev:
                    print("  monotone FAIL", order, n, eps, p)
                    ok = False
                    break
                prev = r
print("rate_mqam strictly increasing on P in [0.5, 1e3] for test matrix:", ok)

# tiny-payload threshold with the feasibility dip
tiny = McsConfig(index=0, modulation_order=4, binary_code_rate=0.11719, overall_code_rate=0.2344)
t1 = snr_threshold(1, tiny, 1e-3)
print("threshold(k=1, QPSK 0.12, 1e-3):", t1)
if t1 is not None and math.isfinite(t1):
    lo = _carried_bits(5, Snr.from_db(t1 - 0.01), 1e-3, fit_for(4))
    hi = _carried_bits(5, Snr.from_db(t1 + 0.01), 1e-3, fit_for(4))
    print("  margin around it:", lo - 1, hi - 1)
print("threshold(k=2, QPSK, 1e-3):", snr_threshold(2, tiny, 1e-3))

# selection boundary semantics
table5 = build_threshold_table(256, 1e-5, default_catalogue())
thr5 = [e.snr_db for e in table5.entries]
print("eps=1e-5 table:", [(e.mcs.index, None if e.snr_db is None else round(e.snr_db, 4)) for e in table5.entries])
at = select_mcs(Snr.from_db(thr5[1]), table5)
print("select at exactly thr[5]:", at.index, " just below:", select_mcs(Snr.from_db(thr5[1] - 1e-6), table5).index)
print("select at 12 dB:", select_mcs(Snr.from_db(12), table5).index)
print("select at -10 dB:", select_mcs(Snr.from_db(-10), table5))

# sim smoke + runtime + dominance
cfg = ScenarioConfig()
traffic = TrafficSpec(k=256, tau=1e-3)
con = QosConstraint(d0=1e-3, epsilon0=1e-3)
cat = full_catalogue()
t0 = time.time()
curve = simulate(cfg, traffic, con, cat)
t1 = time.time()
print(f"simulate: {len(curve.users)} users in {t1-t0:.2f}s, infeasible={curve.infeasible_count}")
snrs = [u.snr_db for u in curve.users]
print("snr range:", round(min(snrs), 2), round(max(snrs), 2))
sel = sorted({u.selected_mcs for u in curve.users if u.selected_mcs is not None})
print("selected indices:", sel)
viol = 0
t0 = time.time()
for u in curve.users:
    if not u.feasible:
        continue
    theory = admission_curve(traffic, con, [Snr.from_db(u.snr_db)], cat)[0].bandwidth_hz
    if u.required_bandwidth_hz < theory * (1 - 1e-9):
        viol += 1
print(f"dominance violations: {viol} (check took {time.time()-t0:.2f}s)")
bw = [p[1] for p in curve.points]
noninc = all(b <= a * (1 + 1e-12) for a, b in zip(bw, bw[1:]))
print("curve non-increasing:", noninc)

# determinism
curve2 = simulate(cfg, traffic, con, cat)
print("deterministic:", curve.points == curve2.points)

# transitions in sorted user cloud (5-row catalogue)
curve5 = simulate(ScenarioConfig(drops=4), traffic, con, default_catalogue())
feas = [u for u in sorted(curve5.users, key=lambda u: u.snr_db) if u.feasible]
trans = [(a.snr_db, b.snr_db, a.selected_mcs, b.selected_mcs)
         for a, b in zip(feas, feas[1:]) if a.selected_mcs != b.selected_mcs]
print("5-row transitions:", [(round(a, 3), round(b, 3), i, j) for a, b, i, j in trans])

# containment check
import numpy as np
from urllc_admission.sim import site_centers
centers = site_centers(19, 500.0)
users = deploy(ScenarioConfig(), seed=7)
worst = max(min(np.hypot(*(np.array(u.position) - c)) for c in centers) for u in users)
print("max distance to nearest site:", round(worst, 2), "(<= 500 expected)")

# doubling-distance slope
c1 = ScenarioConfig()
s1 = link_snr((100.0, 0.0), c1)
s2 = link_snr((200.0, 0.0), c1)
print("snr drop for doubling distance:", round(s1 - s2, 4), "vs", round(37.6 * math.log10(2), 4))
