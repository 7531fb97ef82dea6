"""Python access to the tca annotation core.

Annotation files are passed as .tca text. Structured results come back as
plain dicts and lists in the same shape the HTTP service returns.
"""

import json as _json

from . import _tca

__all__ = [
    "parse",
    "serialize",
    "validate",
    "resolve",
    "compare",
    "make_template",
    "weekday",
    "calendar_month",
]


def parse(text):
    """Return {"file": ... or None, "diagnostics": [...]}."""
    return _json.loads(_tca.parse(text))


def serialize(file):
    """Render a file dict (as returned by parse) in canonical .tca form."""
    return _tca.serialize(_json.dumps(file))


def validate(text):
    return _json.loads(_tca.validate(text))


def resolve(text):
    return _json.loads(_tca.resolve(text))


def compare(a, b, gold=False):
    return _json.loads(_tca.compare(a, b, gold))


def make_template(dialog):
    if not isinstance(dialog, str):
        dialog = _json.dumps(dialog)
    return _tca.make_template(dialog)


def weekday(iso):
    return _tca.weekday(iso)


def calendar_month(year, month):
    return _json.loads(_tca.calendar_month(year, month))
