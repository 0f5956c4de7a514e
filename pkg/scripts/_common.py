"""Shared plumbing for the experiment scripts: dataclass config -> argparse."""

import argparse
import csv
import dataclasses
import sys


def parse_config(cls, description):
    parser = argparse.ArgumentParser(description=description)
    for f in dataclasses.fields(cls):
        flag = "--" + f.name.replace("_", "-")
        if isinstance(f.default, (list, tuple)):
            parser.add_argument(flag, type=type(f.default[0]), nargs="+", default=list(f.default))
        else:
            parser.add_argument(flag, type=type(f.default), default=f.default)
    parser.add_argument("--out", default=None, help="CSV path (default: stdout)")
    args = vars(parser.parse_args())
    out = args.pop("out")
    return cls(**args), out


def write_csv(header, rows, out=None):
    handle = open(out, "w", newline="") if out else sys.stdout
    try:
        w = csv.writer(handle, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
    finally:
        if out:
            handle.close()
