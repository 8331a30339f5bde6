"""Expression classification and canonical rendering.

Gold arguments and generated candidates go through the same renderer, so
comparing rendered strings is comparing normalized token sequences.
"""
from . import ast as A
from .ast import ExprType

_LITERAL_TYPES = {
    "string": ExprType.StringLiteral, "char": ExprType.CharacterLiteral,
    "number": ExprType.NumberLiteral, "bool": ExprType.BooleanLiteral,
    "null": ExprType.NullLiteral,
}


def is_name_chain(e):
    while isinstance(e, A.Select):
        e = e.target
    return isinstance(e, A.Name)


def classify(e):
    """ExprType of an argument expression (None for an empty slot)."""
    if isinstance(e, A.Hole):
        return None
    if isinstance(e, A.Name):
        return ExprType.SimpleName
    if isinstance(e, A.Select):
        return ExprType.QualifiedName if is_name_chain(e) else ExprType.FieldAccess
    if isinstance(e, A.Call):
        return ExprType.MethodInvocation
    if isinstance(e, A.Literal):
        return _LITERAL_TYPES[e.kind]
    if isinstance(e, A.Unary) and e.op == "-" and not e.postfix \
            and isinstance(e.operand, A.Literal) and e.operand.kind == "number":
        # negative numerals are written as a prefix minus but used as literals
        return ExprType.NumberLiteral
    if isinstance(e, A.ClassLit):
        return ExprType.TypeLiteral
    if isinstance(e, A.This):
        return ExprType.ThisExpr
    if isinstance(e, A.Cast):
        return ExprType.CastExpr
    if isinstance(e, A.New):
        return ExprType.ObjectCreation
    if isinstance(e, A.NewArray):
        return ExprType.ArrayCreation
    if isinstance(e, A.Index):
        return ExprType.ArrayAccess
    if isinstance(e, A.Opaque) and e.what in ("lambda", "methodref"):
        return ExprType.LambdaExpr
    return ExprType.CompoundExpr


def render_type(t, erased=True):
    if erased:
        return t.name + "[]" * t.dims
    return t.text()


def render(e):
    """Canonical single-line text of an expression."""
    r = render
    if isinstance(e, A.Hole):
        return ""
    if isinstance(e, A.Name):
        return e.ident
    if isinstance(e, A.Select):
        return f"{r(e.target)}.{e.ident}"
    if isinstance(e, A.Call):
        head = f"{r(e.target)}." if e.target is not None else ""
        return f"{head}{e.ident}({_args(e.args)})"
    if isinstance(e, A.Literal):
        return e.text
    if isinstance(e, A.This):
        return f"{e.qualifier}.this" if e.qualifier else "this"
    if isinstance(e, A.Super):
        return "super"
    if isinstance(e, A.ClassLit):
        return f"{render_type(e.type)}.class"
    if isinstance(e, A.Cast):
        return f"({render_type(e.type)}) {r(e.operand)}"
    if isinstance(e, A.New):
        body = " {...}" if e.anonymous_body else ""
        return f"new {e.type.name}({_args(e.args)}){body}"
    if isinstance(e, A.NewArray):
        s = f"new {e.type.name}" + "".join(f"[{r(d)}]" for d in e.dims) + "[]" * e.extra_dims
        if e.init is not None:
            s += "{" + ", ".join(r(x) for x in e.init) + "}"
        return s
    if isinstance(e, A.Index):
        return f"{r(e.target)}[{r(e.index)}]"
    if isinstance(e, A.Unary):
        return f"{r(e.operand)}{e.op}" if e.postfix else f"{e.op}{r(e.operand)}"
    if isinstance(e, A.Binary):
        return f"{r(e.left)} {e.op} {r(e.right)}"
    if isinstance(e, A.Conditional):
        return f"{r(e.cond)} ? {r(e.then)} : {r(e.other)}"
    if isinstance(e, A.Assign):
        return f"{r(e.target)} {e.op} {r(e.value)}"
    if isinstance(e, A.InstanceOf):
        return f"{r(e.operand)} instanceof {render_type(e.type, False)}"
    if isinstance(e, A.Paren):
        return f"({r(e.inner)})"
    if isinstance(e, A.ArrayInit):
        return "{" + ", ".join(r(x) for x in e.items) + "}"
    if isinstance(e, A.Opaque):
        return f"<{e.what}>"
    raise TypeError(f"cannot render {type(e).__name__}")


def _args(args):
    return ", ".join(render(a) for a in args)


def count_holes(e):
    return sum(1 for n in A.walk(e) if isinstance(n, A.Hole))


def placeholder_shape(e):
    """Outermost arguments/dims/index emptied; None for other expression kinds."""
    if isinstance(e, A.Call):
        return A.Call(e.target, e.ident, [A.Hole() for _ in e.args])
    if isinstance(e, A.New):
        return A.New(e.type, [A.Hole() for _ in e.args])
    if isinstance(e, A.NewArray):
        dims = [A.Hole() for _ in e.dims]
        extra = e.extra_dims
        if not dims and extra:
            dims, extra = [A.Hole()], extra - 1
        return A.NewArray(e.type, dims, extra)
    if isinstance(e, A.Index):
        return A.Index(e.target, A.Hole())
    return None


def strip_this(text):
    return text[5:] if text.startswith("this.") else text
