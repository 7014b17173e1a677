#!/usr/bin/python3
# vim: tabstop=8 expandtab shiftwidth=4 softtabstop=4
"""
report.py
Human readable and CSV output of exact results
"""

import csv
import io
import sys

from sympy import Rational, oo

from libs.errors import KStabError

config = None

def report_set_config(config_in):
    global config
    config = config_in

CSV_HEADER = ["instance", "candidate", "quantity", "value_num", "value_den"]

def format_rational(x):
    """p/q, integer or oo"""
    if x == oo:
        return "oo"
    x = Rational(x)
    return str(x)

def split_rational(x):
    """(num, den) with +oo as (1, 0)"""
    if x == oo:
        return 1, 0
    x = Rational(x)
    return x.p, x.q

def join_rational(num, den):
    num, den = int(num), int(den)
    if den == 0:
        if num != 1:
            raise KStabError("malformed", f"{num}/0 is not a value")
        return oo
    return Rational(num, den)


class Record:
    """This class is one (instance, candidate, quantity, value) row"""
    def __init__(self, instance, candidate, quantity, value):
        self.instance = instance
        self.candidate = candidate
        self.quantity = quantity
        self.value = value

    def __repr__(self):
        return f"Record({self.instance},{self.candidate},{self.quantity}={format_rational(self.value)})"

    def __eq__(self, other):
        return (isinstance(other, Record) and
                (self.instance, self.candidate, self.quantity, self.value) ==
                (other.instance, other.candidate, other.quantity, other.value))

    def row(self):
        num, den = split_rational(self.value)
        return [self.instance, self.candidate, self.quantity, num, den]


class Report:
    """Collects human lines and records; written once at the end"""
    def __init__(self, instance=""):
        self.instance = instance
        self.lines = []
        self.records = []

    def line(self, text=""):
        self.lines.append(text)

    def value(self, quantity, value, candidate="", label=None):
        self.records.append(Record(self.instance, candidate, quantity, value))
        name = label or quantity
        if candidate:
            self.lines.append(f"{candidate:>10}  {name} = {format_rational(value)}")
        else:
            self.lines.append(f"{name} = {format_rational(value)}")

    def table(self, header, rows):
        cells = [[str(c) for c in header]] + [[format_rational(c) if not isinstance(c, str) else c
                                               for c in row] for row in rows]
        widths = [max(len(r[i]) for r in cells) for i in range(len(header))]
        for r in cells:
            self.lines.append("  ".join(c.rjust(w) for c, w in zip(r, widths)))

    def text(self):
        return "\n".join(self.lines) + "\n"

    def csv_text(self):
        return write_records(self.records)

    def emit(self, fmt=None, out=None):
        if config is not None:
            fmt = fmt or config.format
            out = out or config.out
        fmt = fmt or "human"
        data = self.csv_text() if fmt == "csv" else self.text()
        if out and out != "-":
            with open(out, "w", newline="") as f:
                f.write(data)
        else:
            sys.stdout.write(data)


def write_records(records):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for r in records:
        writer.writerow(r.row())
    return buf.getvalue()

def read_records(text):
    """Parse CSV written by write_records back into exact Records"""
    reader = csv.reader(io.StringIO(text))
    rows = list(reader)
    if not rows or rows[0] != CSV_HEADER:
        raise KStabError("malformed", "missing CSV header")
    records = []
    for row in rows[1:]:
        if not row:
            continue
        if len(row) != len(CSV_HEADER):
            raise KStabError("malformed", f"CSV row {row} has {len(row)} fields")
        records.append(Record(row[0], row[1], row[2], join_rational(row[3], row[4])))
    return records
