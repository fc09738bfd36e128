"""Per-site output entropy of symmetric families against the channel floor."""
from __future__ import annotations

from definetti import QuantumChannel, entropy_spec, extensivity_trend, min_output_entropy, proposition_check

for label, ch in [("dephasing", QuantumChannel.dephasing()),
                  ("depolarizing p=0.3", QuantumChannel.depolarizing(0.3))]:
    print(f"{label}: min output entropy {min_output_entropy(ch).value:.6f}")
    for fam in ("cat", "Ex2", "iidplus"):
        rows = extensivity_trend(ch, fam, range(2, 7))
        vals = " ".join(f"{r.value:.4f}" for r in rows)
        print(f"    {fam:>8}: {vals}  all >= floor: {all(r.passed for r in rows)}")

print("S(rho^N)/N against the pure floor with finite-size slack:")
for r in proposition_check(entropy_spec(2), "Ex1", range(2, 7)):
    print(f"    N={r.N} value={r.value:.4f} floor={r.floor:.1e} slack={r.slack:.3f} pass={r.passed}")
