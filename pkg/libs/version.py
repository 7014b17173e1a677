#!/usr/bin/python3
# vim: tabstop=8 expandtab shiftwidth=4 softtabstop=4
"""
version.py
Release number shown by --version and written into saved settings
"""

VERSION = "1.0.0"
COPYRIGHT = "\xA92025 PyKStab developers"

config = None

def version_set_config(config_in):
    global config
    config = config_in
    config.version = VERSION
    config.copyright = COPYRIGHT

def version_banner():
    return f"PyKStab {VERSION} {COPYRIGHT}"
