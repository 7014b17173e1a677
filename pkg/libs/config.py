#!/usr/bin/python3
# vim: tabstop=8 expandtab shiftwidth=4 softtabstop=4
"""
config.py
Global configuration, settings file and command line parsing
"""

import argparse
import logging
import os
import sys

from sympy import Rational

from libs.errors import KStabError
from libs.version import *
from libs.report import report_set_config
from libs.checks import checks_set_config
from libs.instances import parse_rational

config = None

log = logging.getLogger(__name__)

LOG_FORMAT = "%(levelname)s %(name)s: %(message)s"
FORMATS = ("human", "csv")

def parse_schedule(text):
    try:
        schedule = tuple(int(x) for x in str(text).replace(" ", "").split(","))
    except ValueError:
        raise KStabError("precondition", f"bad m schedule '{text}'")
    return schedule

def setup_logging(debug):
    level = logging.DEBUG if debug else logging.WARNING
    logging.basicConfig(level=level, format=LOG_FORMAT, stream=sys.stderr)
    logging.getLogger().setLevel(level)

def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--config',
                        action='store',
                        default=os.path.join(os.path.expanduser('~'), ".pykstab"),
                        help='settings file to use')
    common.add_argument('--save-config', action='store_true',
                        help='write the effective settings back to the settings file')
    common.add_argument('--debug', action='store_true', default=None,
                        help='log progress at DEBUG level')
    common.add_argument('--format', choices=FORMATS, help='output format')
    common.add_argument('--radius', type=int, help='sup-norm radius of candidate valuations')
    common.add_argument('--m-schedule', dest='m_schedule', help='degrees m, e.g. 4,8,16,24')
    common.add_argument('--quad-nodes', dest='quad_nodes', type=int,
                        help='Gauss-Legendre nodes of the floating cross-check')
    common.add_argument('--a-denominator', dest='a_denominator', type=int,
                        help='bisection resolution 1/N for a(X,Delta)')
    common.add_argument('--epsilon', help='tolerance of S_m <= (1+eps) S')
    common.add_argument('--tolerance', help='tolerance of |S_m - S| at the last degree')
    common.add_argument('--out', help='write the report to this file')

    parser = argparse.ArgumentParser(prog='PyKStab',
                                     description='Exact K-stability invariants of toric pairs')
    parser.add_argument('--version', action='version', version=version_banner())
    sub = parser.add_subparsers(dest='command', metavar='command')

    def instance_command(name, help_text, aliases=()):
        p = sub.add_parser(name, aliases=list(aliases), parents=[common], help=help_text)
        p.add_argument('instance', help='bundled instance name or .fan file')
        return p

    def valuation_args(p):
        group = p.add_mutually_exclusive_group(required=True)
        group.add_argument('--ray', type=int, help='index of a ray of the fan')
        group.add_argument('--v', help='integer vector, e.g. 1,1')

    p = instance_command('volume', 'volume of a divisor')
    p.add_argument('--divisor', default='-K', help='divisor name (-K is built in)')
    valuation_args(instance_command('s', 'A, S by both routes and S_m of one valuation'))
    valuation_args(instance_command('sm', 'S_m table of one valuation'))
    instance_command('delta', 'delta upper bound over candidate valuations')
    instance_command('delta-m', 'delta_m upper bounds over the m schedule')
    instance_command('a', 'a(X,Delta) and the assumption gate')
    instance_command('model', 'anticanonical model and decomposition table')
    p = instance_command('lemma26', 'S(A) >= 1/(n+1) for ample A', aliases=['ample-s'])
    p.add_argument('--divisor', help='divisor name; default generated ample classes')
    p = sub.add_parser('example38', aliases=['threefold'], parents=[common],
                       help='the threefold closed forms')
    p.add_argument('--h2', required=True, help='H^2 as p/q')
    p.add_argument('--hk', required=True, help='H.(-K_S) as p/q')
    p.add_argument('--a0', help='a(X) for the assumption gate, p/q')
    p = sub.add_parser('check', parents=[common], help='run the invariant suite')
    p.add_argument('instances', nargs='*', help='bundled names or .fan files; default all bundled')
    p.add_argument('--only', nargs='*', help='run only these checks')
    return parser


class pykstab:
    """This class holds the settings of one run"""
    def __init__(self, argv=None, read_file=True):
        global config
        config = self
        version_set_config(self)
        report_set_config(self)
        checks_set_config(self)
        self.set_defaults()
        self.parser = build_parser()
        self.args = self.parser.parse_args(argv)
        self.config_file = getattr(self.args, "config", None)
        if read_file and self.config_file:
            self.readConfig()
        self.apply_args()
        self.validate()
        setup_logging(self.debug)
        if getattr(self.args, "save_config", False):
            self.saveConfig()

    def set_defaults(self):
        self.radius = 3
        self.m_schedule = (4, 8, 16, 24)
        self.format = "human"
        self.quad_nodes = 64
        self.a_denominator = 65536
        self.epsilon = Rational(1, 5)
        self.tolerance = Rational(1, 20)
        self.out = None
        self.debug = False

    def apply_args(self):
        args = self.args
        for key in ("radius", "format", "quad_nodes", "a_denominator", "out", "debug"):
            value = getattr(args, key, None)
            if value is not None:
                setattr(self, key, value)
        if getattr(args, "m_schedule", None) is not None:
            self.m_schedule = parse_schedule(args.m_schedule)
        for key in ("epsilon", "tolerance"):
            value = getattr(args, key, None)
            if value is not None:
                setattr(self, key, parse_rational(value))

    def validate(self):
        if self.radius < 1:
            raise KStabError("precondition", f"radius {self.radius} must be at least 1")
        if not self.m_schedule or self.m_schedule[0] < 1 or \
           any(a >= b for a, b in zip(self.m_schedule, self.m_schedule[1:])):
            raise KStabError("precondition", f"m schedule {self.m_schedule} must increase strictly")
        if self.format not in FORMATS:
            raise KStabError("precondition", f"unknown format '{self.format}'")
        if self.quad_nodes < 1 or self.a_denominator < 1:
            raise KStabError("precondition", "quad_nodes and a_denominator must be positive")
        if self.epsilon <= 0 or self.tolerance <= 0:
            raise KStabError("precondition", "epsilon and tolerance must be positive")

    def saveConfig(self):
        try:
            f = open(self.config_file, "w")
            f.write("# %s settings\n" % (version_banner()))
            f.write("radius=%d\n" % (self.radius))
            f.write("m_schedule=%s\n" % (",".join(str(m) for m in self.m_schedule)))
            f.write("format=%s\n" % (self.format))
            f.write("quad_nodes=%d\n" % (self.quad_nodes))
            f.write("a_denominator=%d\n" % (self.a_denominator))
            f.write("epsilon=%s\n" % (self.epsilon))
            f.write("tolerance=%s\n" % (self.tolerance))
            f.write("debug=%s\n" % (self.debug))
            f.close()
        except OSError:
            log.warning("cannot write %s", self.config_file)

    def readConfig(self):
        try:
            f = open(self.config_file, "r")
        except OSError:
            return False
        with f:
            for line in f:
                if not line.strip() or line.lstrip()[0] == '#':
                    continue
                vars = line.strip().split("=")
                if len(vars) != 2:
                    continue
                key, value = vars[0].strip(), vars[1].strip()
                try:
                    self.setting(key, value)
                except (ValueError, KStabError):
                    log.warning("%s: bad value for %s", self.config_file, key)
        return True

    def setting(self, key, value):
        if key == "radius":
            self.radius = int(value)
        elif key == "m_schedule":
            self.m_schedule = parse_schedule(value)
        elif key == "format":
            self.format = value
        elif key == "quad_nodes":
            self.quad_nodes = int(value)
        elif key == "a_denominator":
            self.a_denominator = int(value)
        elif key == "epsilon":
            self.epsilon = parse_rational(value)
        elif key == "tolerance":
            self.tolerance = parse_rational(value)
        elif key == "out":
            self.out = value
        elif key == "debug":
            self.debug = True if value == "True" else False
