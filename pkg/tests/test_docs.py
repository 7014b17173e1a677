#!/usr/bin/python3
# vim: tabstop=8 expandtab shiftwidth=4 softtabstop=4
"""
test_docs.py
"""

import os
import re

import pytest

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
LINK_RE = re.compile(r"\]\(([^)#]+\.md)(#[^)]*)?\)")

def markdown_files():
    files = [os.path.join(ROOT, "README.md")]
    docs = os.path.join(ROOT, "docs")
    files += [os.path.join(docs, name) for name in sorted(os.listdir(docs)) if name.endswith(".md")]
    return files

@pytest.mark.parametrize("path", markdown_files(), ids=os.path.basename)
def test_relative_links_resolve(path):
    with open(path) as f:
        text = f.read()
    for target, _anchor in LINK_RE.findall(text):
        if "://" in target:
            continue
        assert os.path.exists(os.path.join(os.path.dirname(path), target)), target
