#!/usr/bin/env python3
"""Download the public signed network collection and convert graphs into
edge-list fixtures for the test suite.

    python3 scripts/fetch_datasets.py list
    python3 scripts/fetch_datasets.py download --dest data/raw
    python3 scripts/fetch_datasets.py convert data/raw/<file> --as G1

`convert` accepts either a whitespace/comma separated edge list with
`u v sign` rows or a square matrix with entries in {-1, 0, 1}. The result
is written to crates/core/fixtures/<name>.txt only if its node, edge and
negative-edge counts match the published sizes below, so a wrong mapping
of raw file to graph name is rejected rather than installed.
"""

import argparse
import json
import re
import sys
import urllib.request
from pathlib import Path

ARTICLE = "https://api.figshare.com/v2/articles/5700832"
FIXTURES = Path(__file__).resolve().parent.parent / "crates" / "core" / "fixtures"

# name: (n, m, m_minus, description)
EXPECTED = {
    "G1": (16, 58, 29, "highland tribes"),
    "G2": (18, 49, 12, "monastery interactions"),
    "G3": (17, 40, 17, "fraternity preferences"),
    "G4": (17, 36, 16, "college preferences"),
    "G5": (100, 2461, 1047, "senate co-sponsorship"),
    "G6": (690, 1080, 220, "yeast gene regulation"),
    "G7": (1461, 3215, 1336, "E. coli gene regulation"),
    "G8": (329, 779, 264, "EGFR pathway"),
    "G9": (678, 1425, 478, "macrophage interaction map"),
}


def article_files():
    try:
        with urllib.request.urlopen(ARTICLE, timeout=60) as resp:
            return json.load(resp)["files"]
    except OSError as e:
        sys.exit(f"cannot reach {ARTICLE}: {e}")


def cmd_list(_args):
    for f in article_files():
        print(f"{f['name']}\t{f['size']} bytes\t{f['download_url']}")


def cmd_download(args):
    dest = Path(args.dest)
    dest.mkdir(parents=True, exist_ok=True)
    for f in article_files():
        target = dest / f["name"]
        if target.exists() and target.stat().st_size == f["size"]:
            print(f"have {target}")
            continue
        print(f"fetching {f['name']}")
        urllib.request.urlretrieve(f["download_url"], target)


def parse_rows(text):
    rows = []
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = [t for t in re.split(r"[\s,;]+", line) if t]
        try:
            rows.append([int(float(t)) for t in tokens])
        except ValueError:
            continue  # header or label row
    return rows


def edges_from_matrix(rows):
    n = len(rows)
    edges = {}
    for i in range(n):
        for j in range(i + 1, n):
            a, b = rows[i][j], rows[j][i]
            if a != b and a != 0 and b != 0:
                raise ValueError(f"matrix disagrees at ({i}, {j}): {a} vs {b}")
            s = a or b
            if s not in (-1, 0, 1):
                raise ValueError(f"entry {s} at ({i}, {j}) is not a sign")
            if s:
                edges[(i, j)] = s
    return n, edges


def edges_from_list(rows):
    ids = {}
    edges = {}
    for r in rows:
        if len(r) < 3:
            raise ValueError(f"row {r} has fewer than three columns")
        u, v, s = r[0], r[1], r[2]
        if s not in (-1, 1):
            raise ValueError(f"sign {s} in row {r}")
        for x in (u, v):
            ids.setdefault(x, len(ids))
        a, b = sorted((ids[u], ids[v]))
        if a == b:
            raise ValueError(f"self-loop in row {r}")
        if edges.get((a, b), s) != s:
            raise ValueError(f"edge {u}-{v} listed with both signs")
        edges[(a, b)] = s
    return len(ids), edges


def cmd_convert(args):
    name = args.name.upper()
    if name not in EXPECTED:
        sys.exit(f"unknown graph {args.name}; expected one of {', '.join(EXPECTED)}")
    rows = parse_rows(Path(args.raw).read_text(errors="replace"))
    if args.format == "auto":
        square = bool(rows) and all(len(r) == len(rows) for r in rows)
        signs_only = all(x in (-1, 0, 1) for r in rows for x in r)
        zero_diagonal = square and all(rows[i][i] == 0 for i in range(len(rows)))
        args.format = "matrix" if square and signs_only and zero_diagonal else "list"
    n, edges = edges_from_matrix(rows) if args.format == "matrix" else edges_from_list(rows)
    m = len(edges)
    neg = sum(1 for s in edges.values() if s < 0)
    want = EXPECTED[name][:3]
    if (n, m, neg) != want and not args.force:
        sys.exit(f"{args.raw}: n={n} m={m} m-={neg}, but {name} has n={want[0]} m={want[1]} m-={want[2]}")
    FIXTURES.mkdir(parents=True, exist_ok=True)
    out = FIXTURES / f"{name}.txt"
    with out.open("w") as fh:
        fh.write(f"# {name} {EXPECTED[name][3]}, converted from {Path(args.raw).name}\n")
        fh.write(f"{n} {m}\n")
        for (u, v), s in sorted(edges.items()):
            fh.write(f"{u} {v} {'+1' if s > 0 else '-1'}\n")
    print(f"wrote {out} (n={n} m={m} m-={neg})")


def main():
    p = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = p.add_subparsers(dest="cmd", required=True)
    sub.add_parser("list").set_defaults(func=cmd_list)
    d = sub.add_parser("download")
    d.add_argument("--dest", default="data/raw")
    d.set_defaults(func=cmd_download)
    c = sub.add_parser("convert")
    c.add_argument("raw")
    c.add_argument("--as", dest="name", required=True)
    c.add_argument("--format", choices=["auto", "matrix", "list"], default="auto")
    c.add_argument("--force", action="store_true", help="write even if the sizes differ")
    c.set_defaults(func=cmd_convert)
    args = p.parse_args()
    args.func(args)


if __name__ == "__main__":
    main()
