"""Throughput comparison of the compiled and pure-Python range coders.

Runs the encode and decode hot loops over identical symbol streams in
both backends (selected via subprocesses so module import picks the
right one) and prints symbols/second plus the speedup. The two backends
are bit-exact twins, so output sizes must match.

Usage: python benchmarks/bench_coder.py [n_symbols]
"""

import json
import os
import subprocess
import sys

_WORKER = """
import json, sys, time
import numpy as np
from meshpress.entropy import (AdaptiveModel, RangeDecoder, RangeEncoder,
                               BACKEND_NAME)

n = int(sys.argv[1])
rng = np.random.default_rng(0)
alphabets = (2, 17, 256)
streams = [rng.integers(0, a, size=n // len(alphabets)).tolist()
           for a in alphabets]

t0 = time.perf_counter()
enc = RangeEncoder()
models = [AdaptiveModel(a) for a in alphabets]
for syms, m in zip(streams, models):
    encode = enc.encode_symbol
    for s in syms:
        encode(m, s)
data = enc.finish()
t_enc = time.perf_counter() - t0

t0 = time.perf_counter()
dec = RangeDecoder(data)
models = [AdaptiveModel(a) for a in alphabets]
ok = True
for syms, m in zip(streams, models):
    decode = dec.decode_symbol
    for s in syms:
        ok = ok and decode(m) == s
t_dec = time.perf_counter() - t0

total = sum(len(s) for s in streams)
print(json.dumps(dict(backend=BACKEND_NAME, ok=ok, nbytes=len(data),
                      enc_sps=total / t_enc, dec_sps=total / t_dec)))
"""


def run(pure: bool, n: int) -> dict:
    env = dict(os.environ)
    if pure:
        env["MESHPRESS_PURE_PYTHON"] = "1"
    else:
        env.pop("MESHPRESS_PURE_PYTHON", None)
    proc = subprocess.run([sys.executable, "-c", _WORKER, str(n)],
                          capture_output=True, text=True, check=True, env=env)
    return json.loads(proc.stdout)


def main() -> None:
    n = int(sys.argv[1]) if len(sys.argv) > 1 else 1_500_000
    results = [run(pure=False, n=n), run(pure=True, n=n)]
    assert all(r["ok"] for r in results), "round-trip mismatch"
    assert results[0]["nbytes"] == results[1]["nbytes"], "backends differ"
    print(f"{n} symbols, {results[0]['nbytes']} bytes compressed")
    print(f"{'backend':<10}{'encode Msym/s':>15}{'decode Msym/s':>15}")
    for r in results:
        print(f"{r['backend']:<10}{r['enc_sps'] / 1e6:>15.2f}"
              f"{r['dec_sps'] / 1e6:>15.2f}")
    enc_speedup = results[0]["enc_sps"] / results[1]["enc_sps"]
    dec_speedup = results[0]["dec_sps"] / results[1]["dec_sps"]
    print(f"speedup: encode {enc_speedup:.1f}x, decode {dec_speedup:.1f}x")


if __name__ == "__main__":
    main()
