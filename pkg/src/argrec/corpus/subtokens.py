import re

_SEPARATORS = re.compile(r"[^A-Za-z0-9]+")
_CASE_BREAK = re.compile(r"(?<=[a-z0-9])(?=[A-Z])")


def split_subtokens(identifier):
    """Split an identifier by under_score and camelCase conventions.

    >>> split_subtokens("PROP_BACKGROUND_DRAWING")
    ['prop', 'background', 'drawing']
    >>> split_subtokens("getUserName2")
    ['get', 'user', 'name2']
    """
    out = []
    for part in _SEPARATORS.split(identifier):
        if not part:
            continue
        out.extend(p.lower() for p in _CASE_BREAK.split(part) if p)
    return out
