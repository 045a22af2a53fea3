"""Straight fire-line detection log-likelihood profile.

Writes ``profile.csv`` (delta_t_s, log_p) and prints the floor, peak and
edge widths.  Run with ``--config`` to change the detection constants.
"""

import argparse
import json
from pathlib import Path

from firelik.cli import cmd_profile
from firelik.config import RunConfig, load_config


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--config", help="run configuration (defaults: sigma 2000 m, 2 h decay)")
    ap.add_argument("--out", default="out/profile")
    args = ap.parse_args()
    cfg = load_config(args.config) if args.config else RunConfig()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    print(json.dumps(cmd_profile(cfg, out), indent=2))


if __name__ == "__main__":
    main()
