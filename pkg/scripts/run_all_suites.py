"""Run every shipped task file and summarise exit codes."""

import argparse
import subprocess
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--threads", type=int, default=1)
    ap.add_argument("--out", type=Path, default=None, help="directory for machine reports")
    args = ap.parse_args()
    if args.out:
        args.out.mkdir(parents=True, exist_ok=True)
    worst = 0
    for path in sorted((ROOT / "tasks").glob("*.json")):
        p = subprocess.run([sys.executable, "-m", "workbench.cli", "run", str(path), "--format", "machine",
                            "--threads", str(args.threads)], capture_output=True, text=True)
        print(f"{path.stem:<24} exit={p.returncode}  {p.stderr.strip()}")
        if args.out:
            (args.out / f"{path.stem}.report.json").write_text(p.stdout)
        # false-claim.json is expected to fail
        if path.stem != "false-claim":
            worst = max(worst, p.returncode)
    return worst


if __name__ == "__main__":
    sys.exit(main())
