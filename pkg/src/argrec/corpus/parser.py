"""Recursive-descent parser for the supported Java subset.

Lambdas, method references, switch constructs, annotations, local classes
and anonymous class bodies are kept as opaque spans. A statement the parser
cannot handle is skipped to its terminating ';' (or the closing brace of the
enclosing block) and recorded as an OpaqueStmt.
"""
from __future__ import annotations

from . import ast as A
from .lexer import PRIMITIVES, ParseError, check_balance, tokenize

MODIFIERS = frozenset(
    "public protected private static final abstract native synchronized "
    "transient volatile strictfp default".split()
)
ASSIGN_OPS = frozenset("= += -= *= /= %= &= |= ^= <<= >>= >>>=".split())
BINARY_LEVELS = [
    ("||",), ("&&",), ("|",), ("^",), ("&",), ("==", "!="),
    ("<", ">", "<=", ">=", "instanceof"), ("<<", ">>", ">>>"),
    ("+", "-"), ("*", "/", "%"),
]
_EOF = None


def parse_unit(source, path="<memory>", project=""):
    tokens = tokenize(source, path)
    check_balance(tokens, path)
    unit = Parser(tokens, path).unit()
    unit.source = source
    unit.project = project
    return unit


def parse_expression(text):
    """Parse a standalone expression (used for rendered candidates and gold text)."""
    tokens = tokenize(text)
    check_balance(tokens)
    p = Parser(tokens, "<expr>")
    e = p.expr()
    if p.i != len(tokens):
        p.fail("trailing tokens after expression")
    return e


class Parser:
    def __init__(self, tokens, path):
        self.toks = tokens
        self.path = path
        self.i = 0
        self.opaque = []

    # ------------------------------------------------------------ helpers
    def peek(self, k=0):
        j = self.i + k
        return self.toks[j] if j < len(self.toks) else _EOF

    def at(self, text, k=0):
        t = self.peek(k)
        return t is not None and t.text == text and t.kind in ("op", "keyword", "bool", "null")

    def at_ident(self, k=0):
        t = self.peek(k)
        return t is not None and t.kind == "ident"

    def accept(self, text):
        if self.at(text):
            self.i += 1
            return True
        return False

    def expect(self, text):
        if not self.at(text):
            self.fail(f"expected '{text}'")
        self.i += 1

    def expect_semi(self):
        # partial code: tolerate a missing ';' right before a closing brace
        if self.at("}") or self.peek() is _EOF:
            return
        self.expect(";")

    def ident(self):
        t = self.peek()
        if t is None or t.kind != "ident":
            self.fail("expected identifier")
        self.i += 1
        return t.text

    def fail(self, msg):
        t = self.peek()
        if t is None:
            t = self.toks[-1] if self.toks else None
            line, col = (t.line, t.col + len(t.text)) if t else (1, 1)
            raise ParseError(msg + " at end of input", line, col, self.path)
        raise ParseError(f"{msg}, found {t.text or '<hole>'!r}", t.line, t.col, self.path)

    def skip_balanced(self):
        """Skip one bracketed group starting at the current token."""
        opener = self.peek().text
        closer = {"(": ")", "[": "]", "{": "}"}[opener]
        depth = 0
        while True:
            t = self.peek()
            if t is None:
                self.fail(f"unbalanced '{opener}'")
            if t.kind == "op":
                if t.text == opener:
                    depth += 1
                elif t.text == closer:
                    depth -= 1
                    if depth == 0:
                        self.i += 1
                        return
            self.i += 1

    def matching(self, j):
        """Index of the bracket matching the opener at index j."""
        opener = self.toks[j].text
        closer = {"(": ")", "[": "]", "{": "}"}[opener]
        depth = 0
        for k in range(j, len(self.toks)):
            t = self.toks[k]
            if t.kind != "op":
                continue
            if t.text == opener:
                depth += 1
            elif t.text == closer:
                depth -= 1
                if depth == 0:
                    return k
        return len(self.toks) - 1

    def annotation(self):
        self.expect("@")
        self.ident()
        while self.at(".") and self.at_ident(1):
            self.i += 2
        if self.at("("):
            self.skip_balanced()

    def modifiers(self):
        mods = set()
        while True:
            t = self.peek()
            if t is None:
                break
            if t.text == "@" and not self.at("interface", 1):
                self.annotation()
            elif t.kind == "keyword" and t.text in MODIFIERS:
                mods.add(t.text)
                self.i += 1
            elif t.kind == "ident" and t.text in ("sealed", "non") and self.at_ident(1):
                self.i += 1
            else:
                break
        return frozenset(mods)

    # ------------------------------------------------------------ unit
    def unit(self):
        package = ""
        imports = []
        while self.at("@") and not self.at("interface", 1):
            self.annotation()
        if self.accept("package"):
            package = self.qualified()
            self.expect(";")
        while self.at("import") or self.at(";"):
            if self.accept(";"):
                continue
            self.i += 1
            static = self.accept("static")
            parts = [self.ident()]
            on_demand = False
            while self.accept("."):
                if self.accept("*"):
                    on_demand = True
                    break
                parts.append(self.ident())
            self.expect(";")
            imports.append((".".join(parts), static, on_demand))
        types = []
        while self.peek() is not _EOF:
            if self.accept(";"):
                continue
            start = self.i
            mods = self.modifiers()
            td = self.type_decl(mods, None, package, start)
            if td is not None:
                types.append(td)
        return A.CompilationUnit(self.path, package, imports, types, self.toks,
                                 opaque=self.opaque)

    def qualified(self):
        parts = [self.ident()]
        while self.at(".") and self.at_ident(1):
            self.i += 1
            parts.append(self.ident())
        return ".".join(parts)

    # ------------------------------------------------------------ declarations
    def type_params(self):
        params = []
        if not self.at("<"):
            return params
        self.i += 1
        while True:
            while self.at("@"):
                self.annotation()
            name = self.ident()
            bound = None
            if self.accept("extends"):
                bound = self.type()
                while self.accept("&"):
                    self.type()
            params.append((name, bound))
            if not self.accept(","):
                break
        self.expect(">")
        return params

    def type_decl(self, mods, outer, package, start):
        if self.at("@") and self.at("interface", 1):
            self.i += 2
            self.ident()
            node = A.OpaqueStmt("annotation-type", start=start)
            self.skip_balanced()
            node.end = self.i
            self.opaque.append(node)
            return None
        t = self.peek()
        if t is None or t.text not in ("class", "interface", "enum") and t.text != "record":
            self.fail("expected type declaration")
        kind = t.text
        self.i += 1
        if kind == "record":
            self.ident()
            node = A.OpaqueStmt("record", start=start)
            while not self.at("{"):
                self.i += 1
            self.skip_balanced()
            node.end = self.i
            self.opaque.append(node)
            return None
        name = self.ident()
        td = A.TypeDecl(kind, name, mods, start=start, outer=outer)
        prefix = outer.qualified_name if outer else package
        td.qualified_name = f"{prefix}.{name}" if prefix else name
        td.type_params = self.type_params()
        while True:
            if self.accept("extends"):
                td.extends.append(self.type())
                while self.accept(","):
                    td.extends.append(self.type())
            elif self.accept("implements"):
                td.implements.append(self.type())
                while self.accept(","):
                    td.implements.append(self.type())
            elif self.at_ident() and self.peek().text == "permits":
                self.i += 1
                self.type()
                while self.accept(","):
                    self.type()
            else:
                break
        if kind == "interface":
            # interfaces list their super-interfaces with 'extends'
            td.implements, td.extends = td.extends, []
        self.class_body(td, package)
        td.end = self.i
        return td

    def class_body(self, td, package):
        td.body_start = self.i
        self.expect("{")
        if td.kind == "enum":
            self.enum_constants(td)
        while not self.at("}"):
            if self.accept(";"):
                continue
            start = self.i
            if self.at("{") or (self.at("static") and self.at("{", 1)):
                static = self.accept("static")
                body = self.block()
                mods = frozenset({"static"}) if static else frozenset()
                td.methods.append(A.MethodDecl(mods, "<clinit>" if static else "<block>",
                                               None, body=body, start=start, end=self.i))
                continue
            mods = self.modifiers()
            if td.kind == "interface" and "private" not in mods:
                mods = mods | {"public"}
            if self.at("class") or self.at("interface") or self.at("enum") or (
                    self.at("@") and self.at("interface", 1)) or (
                    self.at_ident() and self.peek().text == "record" and self.at_ident(1)):
                if td.kind == "interface":
                    mods = mods | {"static"}
                inner = self.type_decl(mods, td, package, start)
                if inner is not None:
                    td.types.append(inner)
                continue
            self.member(td, mods, start)
        self.expect("}")
        td.body_end = self.i

    def enum_constants(self, td):
        while self.at_ident():
            start = self.i
            name = self.ident()
            if self.at("("):
                self.skip_balanced()
            if self.at("{"):
                self.skip_balanced()
            td.enum_constants.append(A.VarDeclarator(name, start=start, end=self.i))
            if not self.accept(","):
                break
        if not self.accept(";") and not self.at("}"):
            self.fail("expected ';' after enum constants")

    def member(self, td, mods, start):
        tparams = self.type_params()
        if self.at_ident() and self.peek().text == td.name and self.at("(", 1):
            self.i += 1
            m = A.MethodDecl(mods, "<init>", None, type_params=tparams, start=start)
            self.method_rest(m)
            td.methods.append(m)
            return
        if self.accept("void"):
            rtype = A.TypeRef("void")
        else:
            rtype = self.type()
        name = self.ident()
        if self.at("("):
            m = A.MethodDecl(mods, name, rtype, type_params=tparams, start=start)
            self.method_rest(m)
            td.methods.append(m)
            return
        fd = A.FieldDecl(mods, rtype, start=start)
        fd.declarators = self.declarators(name)
        self.expect(";")
        fd.end = self.i
        td.fields.append(fd)

    def method_rest(self, m):
        self.expect("(")
        while not self.at(")"):
            pstart = self.i
            self.modifiers()
            ptype = self.type()
            if self.accept("..."):
                ptype.dims += 1
                ptype.varargs = True
            if self.at("this"):  # receiver parameter
                self.i += 1
                self.accept(",")
                continue
            pname = self.ident()
            while self.at("[") and self.at("]", 1):
                self.i += 2
                ptype.dims += 1
            m.params.append(A.Param(ptype, pname, start=pstart, end=self.i))
            if not self.accept(","):
                break
        self.expect(")")
        while self.at("[") and self.at("]", 1):
            self.i += 2
        if self.accept("throws"):
            self.type()
            while self.accept(","):
                self.type()
        if self.at("{"):
            m.body = self.block()
        elif self.accept("default"):
            self.expr()
            self.expect(";")
        else:
            self.expect(";")
        m.end = self.i

    def declarators(self, first_name=None):
        out = []
        while True:
            start = self.i - 1 if first_name else self.i
            name = first_name or self.ident()
            first_name = None
            d = A.VarDeclarator(name, start=start)
            while self.at("[") and self.at("]", 1):
                self.i += 2
                d.dims += 1
            if self.accept("="):
                d.init = self.array_init() if self.at("{") else self.expr()
            d.end = self.i
            out.append(d)
            if not self.accept(","):
                break
        return out

    # ------------------------------------------------------------ types
    def type(self):
        start = self.i
        t = self.peek()
        if t is None:
            self.fail("expected type")
        if t.kind == "keyword" and t.text in PRIMITIVES:
            self.i += 1
            ref = A.TypeRef(t.text, start=start)
        else:
            while self.at("@"):
                self.annotation()
            parts = [self.ident()]
            args = self.type_args()
            while self.at(".") and self.at_ident(1):
                self.i += 1
                parts.append(self.ident())
                args = self.type_args() or args
            ref = A.TypeRef(".".join(parts), args, start=start)
        while self.at("[") and self.at("]", 1):
            self.i += 2
            ref.dims += 1
        ref.end = self.i
        return ref

    def type_args(self):
        if not self.at("<"):
            return []
        self.i += 1
        args = []
        if self.accept(">"):
            return [A.TypeRef("<>")]  # diamond
        while True:
            if self.accept("?"):
                if self.accept("extends") or self.accept("super"):
                    args.append(self.type())
                else:
                    args.append(A.TypeRef("java.lang.Object"))
            else:
                args.append(self.type())
            if not self.accept(","):
                break
        self.expect(">")
        return args

    def try_local_var_head(self):
        """Speculatively parse ``Type name`` at statement start; restore on failure."""
        save = self.i
        try:
            self.modifiers()
            ty = self.type()
            if self.at_ident() and (self.at("=", 1) or self.at(";", 1) or self.at(",", 1)
                                    or self.at("[", 1) or self.at(":", 1) or self.at(")", 1)):
                return ty
        except ParseError:
            pass
        self.i = save
        return None

    # ------------------------------------------------------------ statements
    def block(self):
        start = self.i
        self.expect("{")
        stmts = []
        while not self.at("}"):
            stmts.append(self.block_statement())
        self.expect("}")
        return A.Block(stmts, start=start, end=self.i)

    def block_statement(self):
        save = self.i
        try:
            return self.statement()
        except ParseError:
            self.i = save
            return self.recover(save)

    def recover(self, start):
        while True:
            t = self.peek()
            if t is None:
                break
            if t.kind == "op" and t.text in "({[":
                self.skip_balanced()
                continue
            if t.kind == "op" and t.text == "}":
                break
            self.i += 1
            if t.kind == "op" and t.text == ";":
                break
        if self.i == start:
            self.fail("cannot parse statement")
        node = A.OpaqueStmt("unparsed", start=start, end=self.i)
        self.opaque.append(node)
        return node

    def statement(self):
        start = self.i
        t = self.peek()
        if t is None:
            self.fail("expected statement")
        text = t.text if t.kind in ("op", "keyword") else None
        if text == "{":
            return self.block()
        if text == ";":
            self.i += 1
            return A.Empty(start=start, end=self.i)
        if text == "if":
            self.i += 1
            self.expect("(")
            cond = self.expr()
            self.expect(")")
            then = self.statement()
            other = self.statement() if self.accept("else") else None
            return A.If(cond, then, other, start=start, end=self.i)
        if text == "while":
            self.i += 1
            self.expect("(")
            cond = self.expr()
            self.expect(")")
            body = self.statement()
            return A.While(cond, body, start=start, end=self.i)
        if text == "do":
            self.i += 1
            body = self.statement()
            self.expect("while")
            self.expect("(")
            cond = self.expr()
            self.expect(")")
            self.expect_semi()
            return A.DoWhile(body, cond, start=start, end=self.i)
        if text == "for":
            return self.for_statement()
        if text == "try":
            return self.try_statement()
        if text == "return":
            self.i += 1
            value = None if self.at(";") or self.at("}") else self.expr()
            self.expect_semi()
            return A.Return(value, start=start, end=self.i)
        if text == "throw":
            self.i += 1
            value = self.expr()
            self.expect_semi()
            return A.Throw(value, start=start, end=self.i)
        if text in ("break", "continue"):
            self.i += 1
            if self.at_ident():
                self.i += 1
            self.expect_semi()
            return A.Jump(text, start=start, end=self.i)
        if text == "synchronized" and self.at("(", 1):
            self.i += 1
            self.expect("(")
            lock = self.expr()
            self.expect(")")
            body = self.block()
            return A.Sync(lock, body, start=start, end=self.i)
        if text == "switch" or text == "assert" or (
                text in ("this", "super") and self.at("(", 1)):
            return self.opaque_statement(text if text != "this" and text != "super"
                                         else "explicit-constructor-call")
        if text in ("class", "interface", "enum") or (
                text in ("final", "abstract", "static") and (
                    self.at("class", 1) or self.at("interface", 1))):
            return self.opaque_statement("local-class")
        if t.kind == "ident" and self.at(":", 1):
            self.i += 2
            return self.statement()
        if t.kind == "ident" and t.text == "yield" and not self.at("(", 1) and not self.at("=", 1):
            return self.opaque_statement("yield")
        ty = self.try_local_var_head()
        if ty is not None:
            decl = A.LocalVar(ty, self.declarators(), start=start)
            self.expect_semi()
            decl.end = self.i
            return decl
        e = self.expr()
        self.expect_semi()
        return A.ExprStmt(e, start=start, end=self.i)

    def opaque_statement(self, what):
        start = self.i
        while True:
            t = self.peek()
            if t is None:
                break
            if t.kind == "op" and t.text in "([":
                self.skip_balanced()
                continue
            if t.kind == "op" and t.text == "{":
                self.skip_balanced()
                if what in ("switch", "local-class"):
                    break
                continue
            if t.kind == "op" and t.text == "}":
                break
            self.i += 1
            if t.kind == "op" and t.text == ";":
                break
        node = A.OpaqueStmt(what, start=start, end=self.i)
        self.opaque.append(node)
        return node

    def for_statement(self):
        start = self.i
        self.expect("for")
        self.expect("(")
        save = self.i
        ty = self.try_local_var_head()
        if ty is not None and self.at(":", 1):
        # for-each
            vstart = self.i
            name = self.ident()
            var = A.VarDeclarator(name, start=vstart, end=self.i)
            self.expect(":")
            it = self.expr()
            self.expect(")")
            body = self.statement()
            return A.ForEach(ty, var, it, body, start=start, end=self.i)
        init = []
        if ty is not None:
            init.append(A.LocalVar(ty, self.declarators(), start=save, end=self.i))
        elif not self.at(";"):
            while True:
                es = self.i
                init.append(A.ExprStmt(self.expr(), start=es, end=self.i))
                if not self.accept(","):
                    break
        self.expect(";")
        cond = None if self.at(";") else self.expr()
        self.expect(";")
        update = []
        if not self.at(")"):
            while True:
                es = self.i
                update.append(A.ExprStmt(self.expr(), start=es, end=self.i))
                if not self.accept(","):
                    break
        self.expect(")")
        body = self.statement()
        return A.For(init, cond, update, body, start=start, end=self.i)

    def try_statement(self):
        start = self.i
        self.expect("try")
        node = A.Try(start=start)
        if self.accept("("):
            while not self.at(")"):
                rs = self.i
                ty = self.try_local_var_head()
                if ty is None:
                    self.expr()
                else:
                    node.resources.append(A.LocalVar(ty, self.declarators(), start=rs, end=self.i))
                if not self.accept(";"):
                    break
            self.expect(")")
        node.body = self.block()
        while self.at("catch"):
            cs = self.i
            self.i += 1
            self.expect("(")
            self.modifiers()
            types = [self.type()]
            while self.accept("|"):
                types.append(self.type())
            vs = self.i
            name = self.ident()
            var = A.VarDeclarator(name, start=vs, end=self.i)
            self.expect(")")
            body = self.block()
            node.catches.append(A.Catch(types, var, body, start=cs, end=self.i))
        if self.accept("finally"):
            node.final = self.block()
        node.end = self.i
        return node

    # ------------------------------------------------------------ expressions
    def array_init(self):
        start = self.i
        self.expect("{")
        items = []
        while not self.at("}"):
            items.append(self.array_init() if self.at("{") else self.expr())
            if not self.accept(","):
                break
        self.expect("}")
        return A.ArrayInit(items, start=start, end=self.i)

    def lambda_ahead(self):
        t = self.peek()
        if t is None:
            return False
        if t.kind == "ident" and self.at("->", 1):
            return True
        if t.kind == "op" and t.text == "(":
            k = self.matching(self.i)
            nxt = self.toks[k + 1] if k + 1 < len(self.toks) else None
            return nxt is not None and nxt.text == "->" and nxt.kind == "op"
        return False

    def lambda_expr(self):
        start = self.i
        if self.at("("):
            self.skip_balanced()
        else:
            self.i += 1
        self.expect("->")
        if self.at("{"):
            self.skip_balanced()
        else:
            self.expr()
        node = A.Opaque("lambda", start=start, end=self.i)
        self.opaque.append(node)
        return node

    def expr(self):
        if self.lambda_ahead():
            return self.lambda_expr()
        start = self.i
        left = self.ternary()
        t = self.peek()
        if t is not None and t.kind == "op":
            op = self.compound_op(ASSIGN_OPS)
            if op:
                value = self.expr()
                return A.Assign(op, left, value, start=start, end=self.i)
        return left

    def compound_op(self, allowed):
        """Consume an operator in `allowed`, reassembling '>' '>' shift forms."""
        t = self.peek()
        if t is None or t.kind not in ("op", "keyword"):
            return None
        if t.text == ">":
            n = 1
            while n < 3:
                nx = self.peek(n)
                if nx is None or nx.kind != "op" or nx.line != t.line or nx.col != t.col + n:
                    break
                if nx.text == ">":
                    n += 1
                    continue
                if nx.text in (">=", ">>="):
                    break
                break
            nx = self.peek(n)
            # '>' '>=' adjacency gives '>>=' ; '>' '>' '>=' gives '>>>='
            if nx is not None and nx.kind == "op" and nx.text == ">=" and nx.line == t.line \
                    and nx.col == t.col + n:
                text = ">" * n + ">="
                if text in allowed:
                    self.i += n + 1
                    return text
            text = ">" * n
            if text in allowed:
                self.i += n
                return text
            return None
        if t.text in allowed:
            self.i += 1
            return t.text
        return None

    def ternary(self):
        start = self.i
        cond = self.binary(0)
        if self.accept("?"):
            then = self.expr()
            self.expect(":")
            other = self.lambda_expr() if self.lambda_ahead() else self.ternary()
            return A.Conditional(cond, then, other, start=start, end=self.i)
        return cond

    def binary(self, level):
        if level == len(BINARY_LEVELS):
            return self.unary()
        start = self.i
        left = self.binary(level + 1)
        ops = BINARY_LEVELS[level]
        while True:
            if "instanceof" in ops and self.at("instanceof"):
                self.i += 1
                self.accept("final")
                ty = self.type()
                if self.at_ident():  # pattern variable
                    self.i += 1
                left = A.InstanceOf(left, ty, start=start, end=self.i)
                continue
            save = self.i
            op = self.compound_op(ops)
            if op is None:
                break
            # do not split a shift at a lower-precedence level
            if op == ">" and ">>" not in ops and self.at(">") and \
                    self.peek().col == self.toks[save].col + 1:
                self.i = save
                break
            right = self.binary(level + 1)
            left = A.Binary(op, left, right, start=start, end=self.i)
        return left

    def unary(self):
        start = self.i
        t = self.peek()
        if t is None:
            self.fail("expected expression")
        if t.kind == "op" and t.text in ("+", "-", "!", "~", "++", "--"):
            self.i += 1
            operand = self.unary()
            return A.Unary(t.text, operand, start=start, end=self.i)
        if t.kind == "op" and t.text == "(":
            cast = self.try_cast()
            if cast is not None:
                return cast
        e = self.postfix()
        while self.at("++") or self.at("--"):
            op = self.peek().text
            self.i += 1
            e = A.Unary(op, e, postfix=True, start=start, end=self.i)
        return e

    def try_cast(self):
        start = self.i
        nxt = self.peek(1)
        if nxt is None:
            return None
        if nxt.kind == "keyword" and nxt.text in PRIMITIVES:
            save = self.i
            self.i += 1
            ty = self.type()
            if self.accept(")"):
                operand = self.unary()
                return A.Cast(ty, operand, start=start, end=self.i)
            self.i = save
            return None
        if nxt.kind != "ident":
            return None
        save = self.i
        try:
            self.i += 1
            ty = self.type()
            while self.accept("&"):
                self.type()
            if not self.accept(")"):
                raise ParseError("not a cast", 0, 0)
            after = self.peek()
            ok = after is not None and (
                after.kind in ("ident", "string", "char", "number", "bool", "null")
                or (after.kind == "keyword" and after.text in ("this", "super", "new"))
                or (after.kind == "op" and after.text in ("(", "!", "~"))
            )
            if ok:
                if self.lambda_ahead():
                    operand = self.lambda_expr()
                else:
                    operand = self.unary()
                return A.Cast(ty, operand, start=start, end=self.i)
        except ParseError:
            pass
        self.i = save
        return None

    def arguments(self):
        self.expect("(")
        args = []
        while not self.at(")"):
            args.append(self.expr())
            if not self.accept(","):
                break
        self.expect(")")
        return args

    def skip_call_type_args(self):
        if self.at("<"):
            self.type_args()

    def postfix(self):
        start = self.i
        e = self.primary()
        while True:
            if self.at("."):
                self.i += 1
                if self.at("<"):
                    self.type_args()
                t = self.peek()
                if t is None:
                    self.fail("expected member after '.'")
                if t.kind == "keyword" and t.text == "class":
                    self.i += 1
                    e = A.ClassLit(self.expr_to_type(e), start=start, end=self.i)
                elif t.kind == "keyword" and t.text == "this":
                    self.i += 1
                    e = A.This(qualifier=self.expr_to_type(e).name, start=start, end=self.i)
                elif t.kind == "keyword" and t.text == "new":
                    e = self.creator()
                    e.start = start
                else:
                    name = self.ident()
                    if self.at("("):
                        args = self.arguments()
                        e = A.Call(e, name, args, start=start, end=self.i)
                    else:
                        e = A.Select(e, name, start=start, end=self.i)
            elif self.at("["):
                self.i += 1
                if self.at("]"):
                    # placeholder index: `arr[]`
                    idx = A.Hole(start=self.i, end=self.i)
                else:
                    idx = self.expr()
                self.expect("]")
                e = A.Index(e, idx, start=start, end=self.i)
            elif self.at("::"):
                self.i += 1
                if not self.accept("new"):
                    self.ident()
                e = A.Opaque("methodref", start=start, end=self.i)
                self.opaque.append(e)
            else:
                return e

    def expr_to_type(self, e):
        if isinstance(e, A.Name):
            return A.TypeRef(e.ident, start=e.start, end=e.end)
        if isinstance(e, A.Select):
            inner = self.expr_to_type(e.target)
            return A.TypeRef(inner.name + "." + e.ident, start=e.start, end=e.end)
        if isinstance(e, A.TypeRef):
            return e
        self.fail("expected type name")

    def primary(self):
        start = self.i
        t = self.peek()
        if t is None:
            self.fail("expected expression")
        k = t.kind
        if k == "hole":
            self.i += 1
            return A.Hole(start=start, end=self.i)
        if k in ("string", "char", "number", "bool", "null"):
            self.i += 1
            return A.Literal(k, t.text, start=start, end=self.i)
        if k == "ident":
            # array type class literal: Foo[].class
            if self.at("[", 1) and self.at("]", 2):
                j = self.i + 1
                while self.at("[", j - self.i) and self.at("]", j - self.i + 1):
                    j += 2
                if self.at(".", j - self.i) and self.at("class", j - self.i + 1):
                    ty = self.type()
                    self.expect(".")
                    self.expect("class")
                    return A.ClassLit(ty, start=start, end=self.i)
            self.i += 1
            if self.at("("):
                args = self.arguments()
                return A.Call(None, t.text, args, start=start, end=self.i)
            return A.Name(t.text, start=start, end=self.i)
        if k == "keyword":
            if t.text == "this":
                self.i += 1
                if self.at("("):
                    self.fail("explicit constructor call in expression")
                return A.This(start=start, end=self.i)
            if t.text == "super":
                self.i += 1
                if self.at("::"):
                    return A.Super(start=start, end=self.i)
                self.expect(".")
                name = self.ident()
                if self.at("("):
                    args = self.arguments()
                    return A.Call(A.Super(start=start, end=start + 1), name, args,
                                  start=start, end=self.i)
                return A.Select(A.Super(start=start, end=start + 1), name, start=start, end=self.i)
            if t.text == "new":
                return self.creator()
            if t.text in PRIMITIVES or t.text == "void":
                if t.text == "void":
                    self.i += 1
                    ty = A.TypeRef("void")
                else:
                    ty = self.type()
                if self.at("::"):
                    return A.Name(ty.name, start=start, end=self.i)
                self.expect(".")
                self.expect("class")
                return A.ClassLit(ty, start=start, end=self.i)
            if t.text == "switch":
                self.i += 1
                self.skip_balanced()
                self.skip_balanced()
                node = A.Opaque("switch", start=start, end=self.i)
                self.opaque.append(node)
                return node
        if k == "op":
            if t.text == "(":
                self.i += 1
                inner = self.expr()
                self.expect(")")
                return A.Paren(inner, start=start, end=self.i)
            if t.text == "{":
                return self.array_init()
            if t.text == "@":
                self.annotation()
                return self.primary()
        self.fail("expected expression")

    def creator(self):
        start = self.i
        self.expect("new")
        t = self.peek()
        if t is not None and t.kind == "keyword" and t.text in PRIMITIVES:
            self.i += 1
            ty = A.TypeRef(t.text, start=start + 1, end=self.i)
        else:
            while self.at("@"):
                self.annotation()
            parts = [self.ident()]
            args = self.type_args()
            while self.at(".") and self.at_ident(1):
                self.i += 1
                parts.append(self.ident())
                args = self.type_args() or args
            ty = A.TypeRef(".".join(parts), args, start=start + 1, end=self.i)
        if self.at("["):
            node = A.NewArray(ty, start=start)
            while self.at("["):
                if self.at("]", 1):
                    self.i += 2
                    node.extra_dims += 1
                else:
                    self.i += 1
                    node.dims.append(self.expr())
                    self.expect("]")
            if self.at("{"):
                node.init = self.array_init().items
            node.end = self.i
            return node
        args = self.arguments()
        node = A.New(ty, args, start=start)
        if self.at("{"):
            bs = self.i
            self.skip_balanced()
            node.anonymous_body = True
            self.opaque.append(A.Opaque("anonymous-class", start=bs, end=self.i))
        node.end = self.i
        return node
