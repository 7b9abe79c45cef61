#!/usr/bin/env python3
"""Re-runs the recount oracle and checks it still reproduces the frozen golden files."""
import filecmp
import os
import sys
import tempfile

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))
import recount  # noqa: E402

ROOT = os.path.abspath(os.path.join(os.path.dirname(__file__), "..", ".."))
CASES = {"minicorpus": "manifest.tsv", "lys_1": "manifest_1.tsv", "lys_2": "manifest_2.tsv"}


def main():
    data = os.path.join(ROOT, "data", "minicorpus")
    bad = 0
    for name, manifest in CASES.items():
        with tempfile.TemporaryDirectory() as tmp:
            recount.main(["--manifest", os.path.join(data, manifest), "--lexicon",
                          os.path.join(data, "lexicon.tsv"), "--out", tmp, "--kwic-form", "мати"])
            golden = os.path.join(ROOT, "tests", "golden", name)
            for f in sorted(os.listdir(golden)):
                same = filecmp.cmp(os.path.join(tmp, f), os.path.join(golden, f), shallow=False)
                print(("ok   " if same else "DIFF ") + name + "/" + f)
                bad += not same
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main())
