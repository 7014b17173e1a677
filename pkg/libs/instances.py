#!/usr/bin/python3
# vim: tabstop=8 expandtab shiftwidth=4 softtabstop=4
"""
instances.py
Read toric pair instance files and hold the bundled instance library

Instance files are key=value lines, '#' starts a comment:

    name=f3
    dim=2
    rays=1,0; 0,1; -1,3; 0,-1
    cones=0,1; 1,2; 2,3; 3,0
    delta=0; 0; 1/2; 0
    divisor.A=1,0,1,1
    expect.volume=25/3
    expect.s:0,1=13/9

Numbers are integers or p/q only.  Expected values pin exact results:
volume, delta_upper, a, s:<vector>, ordb:<vector>.
"""

import logging
import os
import re

from sympy import Rational, oo

from libs.errors import KStabError, InstanceError
from libs.fan import *

log = logging.getLogger(__name__)

RATIONAL_RE = re.compile(r"^[+-]?\d+(/\d+)?$")
INTEGER_RE = re.compile(r"^[+-]?\d+$")
EXPECT_KEYS = ("volume", "delta_upper", "a", "s", "ordb")
DATA_DIR = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))),
                        "data", "instances")

def parse_rational(text, filename=None, lineno=None):
    text = text.strip()
    if not RATIONAL_RE.match(text):
        raise InstanceError(f"'{text}' is not an integer or p/q", filename, lineno)
    if "/" in text and int(text.split("/")[1]) == 0:
        raise InstanceError(f"'{text}' has zero denominator", filename, lineno)
    return Rational(text)

def parse_int_list(text, filename=None, lineno=None):
    values = []
    for part in text.split(","):
        part = part.strip()
        if not INTEGER_RE.match(part):
            raise InstanceError(f"'{part}' is not an integer", filename, lineno)
        values.append(int(part))
    return tuple(values)

def parse_vector(text, filename=None, lineno=None):
    return parse_int_list(text, filename, lineno)


class Instance:
    """This class is one parsed instance file"""
    def __init__(self, name, filename=None):
        self.name = name
        self.filename = filename
        self.dim = None
        self.rays = []
        self.cones = []
        self.delta = None
        self.divisors = {}
        self.expected = {}
        self.lines = {}
        self._pair = None

    def __repr__(self):
        return f"Instance({self.name!r}, {len(self.rays)} rays)"

    def _error(self, key, message):
        return InstanceError(message, self.filename, self.lines.get(key))

    def pair(self):
        """Validated ToricPair; fan and pair errors become line anchored"""
        if self._pair is not None:
            return self._pair
        for ray in self.rays:
            if len(ray) != self.dim:
                raise self._error("rays", f"ray {ray} is not of dimension {self.dim}")
        try:
            fan = Fan(self.rays, self.cones, name=self.name)
        except KStabError as e:
            raise self._error("cones", f"{e.kind}: {e.message}")
        try:
            pair = ToricPair(fan, self.delta, name=self.name, divisors=self.divisors)
        except KStabError as e:
            raise self._error("delta", f"{e.kind}: {e.message}")
        for key, coeffs in self.divisors.items():
            if len(coeffs) != len(self.rays):
                raise self._error("divisor." + key,
                                  f"divisor {key} has {len(coeffs)} coefficients for {len(self.rays)} rays")
        self._pair = pair
        return pair


def parse_instance(text, filename=None, name=None):
    inst = Instance(name or "instance", filename)
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line[0] == '#':
            continue
        if "=" not in line:
            raise InstanceError(f"expected key=value, got '{line}'", filename, lineno)
        key, value = [s.strip() for s in line.split("=", 1)]
        inst.lines[key] = lineno
        if key == "name":
            inst.name = value
        elif key == "dim":
            if not INTEGER_RE.match(value) or int(value) < 1:
                raise InstanceError(f"bad dimension '{value}'", filename, lineno)
            inst.dim = int(value)
        elif key == "rays":
            inst.rays = [parse_int_list(v, filename, lineno) for v in value.split(";")]
        elif key == "cones":
            inst.cones = [parse_int_list(v, filename, lineno) for v in value.split(";")]
        elif key == "delta":
            inst.delta = [parse_rational(v, filename, lineno) for v in value.split(";")]
        elif key.startswith("divisor."):
            inst.divisors[key[len("divisor."):]] = [parse_rational(v, filename, lineno)
                                                    for v in value.split(",")]
        elif key.startswith("expect."):
            inst.expected[_expect_key(key[len("expect."):], filename, lineno)] = \
                oo if value == "oo" else parse_rational(value, filename, lineno)
        else:
            raise InstanceError(f"unknown key '{key}'", filename, lineno)
    for key in ("dim", "rays", "cones"):
        if key not in inst.lines:
            raise InstanceError(f"missing '{key}'", filename)
    if inst.delta is not None and len(inst.delta) != len(inst.rays):
        raise InstanceError(f"{len(inst.delta)} boundary coefficients for {len(inst.rays)} rays",
                            filename, inst.lines["delta"])
    return inst

def _expect_key(key, filename, lineno):
    kind, _, arg = key.partition(":")
    if kind not in EXPECT_KEYS:
        raise InstanceError(f"unknown expected value '{kind}'", filename, lineno)
    if kind in ("s", "ordb"):
        return (kind, parse_vector(arg, filename, lineno))
    if arg:
        raise InstanceError(f"'{kind}' takes no argument", filename, lineno)
    return (kind, None)

def load_instance(path):
    try:
        with open(path, "r") as f:
            text = f.read()
    except OSError as e:
        raise InstanceError(f"cannot read: {e.strerror}", path)
    name = os.path.splitext(os.path.basename(path))[0]
    return parse_instance(text, filename=path, name=name)


class InstanceLibrary:
    """This class handles the bundled instances"""
    def __init__(self, directory=DATA_DIR):
        self.directory = directory
        self.db = ["p1", "p2", "p1xp1", "blp2", "f2", "f3"]
        self._cache = {}

    def __str__(self):
        return "\n".join(self.db)

    def get_id(self, name):
        if name not in self.db:
            return None
        if name not in self._cache:
            self._cache[name] = load_instance(os.path.join(self.directory, name + ".fan"))
        return self._cache[name]

    def all(self):
        return [self.get_id(name) for name in self.db]

    def resolve(self, arg):
        """Bundled name or path to an instance file"""
        inst = self.get_id(arg)
        if inst is not None:
            return inst
        if os.path.exists(arg):
            return load_instance(arg)
        raise InstanceError(f"no bundled instance or file named '{arg}'")
