#!/usr/bin/env python3
"""Smoke test for the seqprint_py extension module.

Builds are plain cargo artifacts (no wheel packaging), so this script locates the
compiled cdylib under target/, copies it to a temp directory under the importable
module name, and exercises the bindings end to end.

Run from the repository root after `cargo build -p seqprint-py`:

    python3 python/smoke_test.py
"""

import json
import math
import shutil
import sys
import tempfile
from pathlib import Path

REPO_ROOT = Path(__file__).resolve().parent.parent


def locate_cdylib() -> Path:
    names = ["libseqprint_py.so", "libseqprint_py.dylib", "seqprint_py.dll"]
    candidates = [
        REPO_ROOT / "target" / profile / name
        for profile in ("debug", "release")
        for name in names
    ]
    for path in candidates:
        if path.exists():
            return path
    sys.exit(
        "seqprint_py cdylib not found; run `cargo build -p seqprint-py` first\n"
        + "\n".join(f"  looked at {c}" for c in candidates)
    )


def main() -> None:
    cdylib = locate_cdylib()
    with tempfile.TemporaryDirectory() as tmp:
        shutil.copy(cdylib, Path(tmp) / "seqprint_py.so")
        sys.path.insert(0, tmp)
        import seqprint_py as sp

        # Plug-in entropy of "0101" at m = 2: windows 01, 10, 01 give
        # H = -(2/3)log2(2/3) - (1/3)log2(1/3).
        h = sp.entropy("0101", 2)
        expected = -(2 / 3) * math.log2(2 / 3) - (1 / 3) * math.log2(1 / 3)
        assert abs(h - expected) < 1e-12, h
        assert abs(h - 0.9182958340544896) < 1e-12, h

        # A linearized order-3 de Bruijn sequence hits the ceiling H = 3 exactly.
        assert abs(sp.entropy("0001011100", 3) - 3.0) < 1e-12

        # Deviation is a metric: zero on identical inputs, positive and symmetric
        # otherwise, never above 2.
        s1, s2 = "0110100110010110", "0000011111100000"
        assert sp.deviation(s1, s1, 4) == 0.0
        d12, d21 = sp.deviation(s1, s2, 4), sp.deviation(s2, s1, 4)
        assert d12 == d21 and 0.0 < d12 <= 2.0, (d12, d21)

        # Fingerprint document: versioned layout, 5 features per pattern length.
        doc = json.loads(sp.fingerprint_json("01101001100101101001011001101001", [2, 3, 4]))
        assert doc["layout_version"] == 1
        assert doc["d"] == 15
        assert len(doc["features"]) == 15
        assert doc["provenance"] == "sequence"

        # Generation is deterministic and parameter-sensitive.
        a = sp.generate_bits("arx", 20, 7, 0, 256)
        b = sp.generate_bits("arx", 20, 7, 0, 256)
        assert a == b and len(a) == 256 and set(a) <= {"0", "1"}
        assert sp.generate_bits("arx", 8, 7, 0, 256) != a
        assert sp.generate_bits("uniform-ref", 0, 7, 0, 256) == a  # full-strength alias

        # Degenerate biased generator doubles as the all-zeros test hook.
        assert sp.generate_bits("biased", 0.0, 3, 0, 64) == "0" * 64
        assert sp.generate_bits("biased", 1.0, 3, 0, 64) == "1" * 64

        # Validation errors surface as ValueError.
        for bad in (
            lambda: sp.entropy("01x1", 2),
            lambda: sp.entropy("01", 5),
            lambda: sp.generate_bits("arx", 7, 0, 0, 64),  # odd rounds
            lambda: sp.generate_bits("warp", 0, 0, 0, 64),
        ):
            try:
                bad()
            except ValueError:
                pass
            else:
                raise AssertionError(f"{bad} did not raise")

    print("smoke test: all checks passed")


if __name__ == "__main__":
    main()
