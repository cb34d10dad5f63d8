"""How long does the analysis take compared to getting the data in?"""
import sys

from dimprofile.cli import run_bench
from dimprofile.report import render_timings

rows = int(sys.argv[1]) if len(sys.argv) > 1 else 100_000
for seed in range(3):
    print(render_timings(run_bench(rows, seed)))
