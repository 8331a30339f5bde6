"""Assignment compatibility without casts."""
from .index import BOXES, NULL_TYPE, OBJECT, PRIMITIVES, UNBOXES, ARRAY_SUPERS, split_array

# implicit primitive widening
WIDENS_TO = {
    "byte": {"short", "int", "long", "float", "double"},
    "short": {"int", "long", "float", "double"},
    "char": {"int", "long", "float", "double"},
    "int": {"long", "float", "double"},
    "long": {"float", "double"},
    "float": {"double"},
    "double": set(),
    "boolean": set(),
}
NUMERIC_PRIMITIVES = frozenset(p for p in PRIMITIVES if p != "boolean")


def is_compatible(t_prime, t, index, strict=False):
    """True if a value of type `t_prime` can be passed where `t` is expected.

    Strict mode keeps only equality and inheritance (plus null to reference).
    """
    if t_prime == t:
        return True
    if t_prime == "void" or t == "void" or t == NULL_TYPE:
        return False
    if t_prime == NULL_TYPE:
        return t not in PRIMITIVES
    p_prim, t_prim = t_prime in PRIMITIVES, t in PRIMITIVES
    if p_prim and t_prim:
        return not strict and t in WIDENS_TO[t_prime]
    if p_prim:
        # boxing, then reference widening
        return not strict and index.is_subtype(BOXES[t_prime], t)
    if t_prim:
        u = UNBOXES.get(t_prime)
        return not strict and u is not None and (u == t or t in WIDENS_TO[u])
    return _ref_compatible(t_prime, t, index)


def _ref_compatible(sub, sup, index):
    if sub == sup or sup == OBJECT:
        return True
    sb, sd = split_array(sub)
    pb, pd = split_array(sup)
    if sd:
        if not pd:
            return sup in ARRAY_SUPERS
        if sb in PRIMITIVES or pb in PRIMITIVES:
            return sd == pd and sb == pb
        if sd == pd:
            return _ref_compatible(sb, pb, index)
        if sd > pd:
            # T[][] is an Object[]
            return pb in ARRAY_SUPERS
        return False
    if pd:
        return False
    return index.is_subtype(sub, sup)


def is_common_type(t):
    """Object, String, numeric primitives and their boxes."""
    if t in (OBJECT, "java.lang.String"):
        return True
    if t in NUMERIC_PRIMITIVES:
        return True
    u = UNBOXES.get(t)
    return u is not None and u in NUMERIC_PRIMITIVES
