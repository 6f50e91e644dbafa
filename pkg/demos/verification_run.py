"""Run the verification suites on the quick corpus and print the summary tables."""

from __future__ import annotations

from injhull.verify.corpus import small_corpus
from injhull.verify.suites import run_all

rep = run_all(small_corpus())
print("overall:", rep["status"], f"({rep['instances']} instances)")
for name, s in rep["suites"].items():
    c = s["counts"]
    print(f"  {name:32s} {s['status']:8s} pass={c['pass']:3d} fail={c['fail']} "
          f"vacuous={c['vacuous']} soft={c['soft_fail']}")

print("(delta, h) per hull base:")
for row in rep["tables"]["delta_h"]:
    print(f"  {row['instance']:10s} delta={row['delta']} h={row['h']}")

print("(D, K9) per designated subset on Helly instances:")
for row in rep["tables"]["contraction_morse"]:
    print(f"  {row['instance']:14s} {row['subset']:10s} D={row['D']} K9={row['K_9_0']}")
