"""Tour of the example states and what each one illustrates."""
from __future__ import annotations

from definetti import CATALOG_IDS, build, verify_example
from definetti.config import OptimizerConfig

cfg = OptimizerConfig(starts=4, iterations=300)
for cid, N in zip(CATALOG_IDS, (3, 3, 3, 2, 3, 3, 3)):
    e = build(cid, N)
    rep = verify_example(cid, N, cfg=cfg)
    print(f"{cid} (N={N}): {e.claim}")
    for c in rep.to_dict()['checks']:
        print(f"    {c['name']}: {c['value']:.6g} [{c['kind']}] {'ok' if c['passed'] else 'FAIL'}")
