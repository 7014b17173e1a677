#!/usr/bin/python3
# vim: tabstop=8 expandtab shiftwidth=4 softtabstop=4
"""
errors.py
Exception classes shared by all of PyKStab
"""

class KStabError(Exception):
    """Base error; kind is a short stable name like 'unbounded'"""
    exit_code = 2

    def __init__(self, kind, message=""):
        self.kind = kind
        self.message = message
        if message:
            super().__init__(f"{kind}: {message}")
        else:
            super().__init__(kind)

class InstanceError(KStabError):
    """Bad instance file or bad command line input"""
    def __init__(self, message, filename=None, lineno=None):
        where = ""
        if filename is not None:
            where = str(filename)
            if lineno is not None:
                where += f":{lineno}"
            where += ": "
        super().__init__("instance", where + message)
        self.filename = filename
        self.lineno = lineno

class InconsistencyError(KStabError):
    """Two independent routes disagreed"""
    exit_code = 3

    def __init__(self, message):
        super().__init__("internal-inconsistency", message)
