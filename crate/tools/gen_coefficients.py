#!/usr/bin/env python3
"""Regenerate the newform coefficient files shipped under crates/core/data/.

Requires cypari2 (`pip install --only-binary=:all: cypari2`). Each newform is
selected from the PARI eigenbasis by matching its leading q-expansion.
"""
import sys
from pathlib import Path

import cypari2

# label, level, weight, leading coefficients a_1.., number of terms
FORMS = [
    ("s10n3", 3, 10, [1, -36, -81, 784, -1314], 8000),
    ("s18n1", 1, 18, [1, -528, -4284], 6000),
    ("s4n13", 13, 4, [1, -5, -7, 17, -7], 16000),
    ("s4n21", 21, 4, [1, -3, -3, 1, -18], 30000),
    ("s12n4", 4, 12, [1, 0, -516, 0, -10530], 30000),
]


def main(out_dir):
    pari = cypari2.Pari()
    pari.allocatemem(2 * 10**9)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    for label, level, weight, lead, terms in FORMS:
        mf = pari.mfinit([level, weight], 0)
        chosen = None
        for f in pari.mfeigenbasis(mf):
            head = pari.mfcoefs(f, len(lead))[1:]
            try:
                head = [int(c) for c in head]
            except (TypeError, ValueError):
                continue
            if head == lead:
                chosen = f
                break
        if chosen is None:
            sys.exit(f"{label}: no rational eigenform with leading terms {lead}")
        coeffs = pari.mfcoefs(chosen, terms)[1:]
        path = out / f"{label}.coeffs"
        with path.open("w") as fh:
            fh.write(f"level {level} weight {weight} label {label}\n")
            for n, c in enumerate(coeffs, start=1):
                fh.write(f"{n} {int(c)}\n")
        print(f"wrote {path} ({terms} terms)")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "crates/core/data")
