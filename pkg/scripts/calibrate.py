#!/usr/bin/env python3
"""Run every preset study against the shared test cache and print the fits.

Used to calibrate the desk-scale acceptance bands and to warm the reference
cache before running the acceptance suite.
"""

import pathlib
import sys
import time
from dataclasses import replace

from ewinlse.experiments import evaluate_bands, run_study
from ewinlse.presets import PRESET_NAMES, preset_studies

CACHE = pathlib.Path(__file__).resolve().parents[1] / "tests" / "_refcache"
CACHE.mkdir(parents=True, exist_ok=True)


def main(names):
    for name in names:
        for spec in preset_studies(name):
            if name == "fig51":
                spec = replace(spec, schemes=("ewi_efp",))
            t0 = time.time()
            print(f"=== {name}: {spec.label} ===", flush=True)
            result = run_study(spec, cache_dir=CACHE, log=lambda m: print(m, flush=True))
            for fit in result.fits:
                ints = ",".join(f"{o:.3f}" for o in fit.per_interval)
                slope = "None" if fit.slope is None else f"{fit.slope:.4f}"
                err = "None" if fit.error_at_finest is None else f"{fit.error_at_finest:.4e}"
                print(f"  {fit.scheme:<12} {fit.norm}: slope={slope} finest={err} "
                      f"flags={fit.flags} per_interval=[{ints}]", flush=True)
            for check in evaluate_bands(result):
                print(f"  band {type(check.band).__name__}: "
                      f"{'pass' if check.passed else 'FAIL'} ({check.detail})", flush=True)
            print(f"  elapsed {time.time() - t0:.1f}s", flush=True)


if __name__ == "__main__":
    main(sys.argv[1:] or PRESET_NAMES)
