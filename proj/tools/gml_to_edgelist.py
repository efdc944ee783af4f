#!/usr/bin/env python3
"""Convert a GML graph (e.g. football.gml) to a whitespace edge list.

Nodes are written by label when present, otherwise by id. Spaces inside
labels become underscores. Isolated nodes go into a '# nodes:' header.
"""

import argparse
import re
import sys


def parse_gml(text):
    labels, edges = {}, []
    for block in re.finditer(r"\b(node|edge)\s*\[(.*?)\]", text, re.S):
        kind, body = block.group(1), block.group(2)
        fields = dict(re.findall(r'(\w+)\s+("[^"]*"|\S+)', body))
        fields = {k: v.strip('"') for k, v in fields.items()}
        if kind == "node":
            labels[fields["id"]] = fields.get("label", fields["id"])
        else:
            edges.append((fields["source"], fields["target"]))
    return labels, edges


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("gml")
    ap.add_argument("-o", "--out", help="output file (default stdout)")
    args = ap.parse_args()

    with open(args.gml, encoding="utf-8", errors="replace") as f:
        labels, edges = parse_gml(f.read())
    name = {i: re.sub(r"\s+", "_", l) for i, l in labels.items()}
    seen, lines, touched = set(), [], set()
    for s, t in edges:
        if s == t:
            continue
        key = tuple(sorted((s, t)))
        if key in seen:
            continue
        seen.add(key)
        touched.update(key)
        lines.append(f"{name.get(s, s)} {name.get(t, t)}")
    out = open(args.out, "w", encoding="utf-8") if args.out else sys.stdout
    if set(labels) - touched:
        out.write("# nodes: " + " ".join(name[i] for i in labels) + "\n")
    out.write("\n".join(lines) + "\n")
    if args.out:
        out.close()
    print(f"{len(labels)} nodes, {len(lines)} edges", file=sys.stderr)


if __name__ == "__main__":
    main()
