"""Lexer and recursive-descent parser for the .mbs concrete syntax.

Grammar (EBNF; keywords uppercase except skip/or/not/true/false/card):

    system      = "SYSTEM" IDENT
                  [ "SETS" IDENT { ";" IDENT } ]
                  [ "CONSTANTS" IDENT { "," IDENT } ]
                  [ "PROPERTIES" pred ]
                  [ "VARIABLES" IDENT { "," IDENT } ]
                  "INVARIANT" pred
                  "INITIALISATION" subst
                  "EVENTS" [ event { [";"] event } ]
                  "END"
    event       = IDENT "=" ( any_form | select_form )
    any_form    = "ANY" IDENT { "," IDENT } "WHERE" pred "THEN" subst "END"
    select_form = "SELECT" pred "THEN" subst "END"
    subst       = "skip" | assign { "||" assign }
    assign      = IDENT ":=" expr

    pred        = disj [ "=>" pred ]                      // => right-assoc
    disj        = conj { "or" conj }
    conj        = atom { "&" atom }
    atom        = "true" | "false" | "not" "(" pred ")"
                | expr relop expr | "(" pred ")"
    relop       = ":" | "/:" | "<:" | "=" | "/=" | "<=" | "<" | ">=" | ">"

    expr        = inter { "\\/" inter }
    inter       = addsub { "/\\" addsub }
    addsub      = primary { ("+" | "-") primary }
    primary     = IDENT | NUMBER | "card" "(" expr ")"
                | "{" [ expr { "," expr } ] "}" | "(" expr ")"

ASCII operator conventions: `:` membership, `/:` non-membership, `<:`
inclusion, `\\/` union, `/\\` intersection, `-` difference/subtraction,
`&` conjunction, `=>` implication, `||` parallel assignment.  Comments are
`/* ... */` (non-nesting).  An atom starting with "(" is resolved by
backtracking: a comparison is attempted first, then a parenthesised
predicate; the error that got furthest wins.
"""

from __future__ import annotations

from dataclasses import dataclass

from .check import validate_system
from .errors import SpecSyntaxError
from .syntax import (
    AbstractSystem,
    And,
    Assign,
    BinOp,
    Card,
    CarrierSetDecl,
    Compare,
    EventDef,
    Expr,
    Implies,
    Name,
    NatLit,
    Not,
    Or,
    Parallel,
    Pred,
    SetLit,
    Truth,
)

KEYWORDS = {
    "SYSTEM",
    "SETS",
    "CONSTANTS",
    "PROPERTIES",
    "VARIABLES",
    "INVARIANT",
    "INITIALISATION",
    "EVENTS",
    "END",
    "ANY",
    "WHERE",
    "THEN",
    "SELECT",
    "NAT",
    "skip",
    "or",
    "not",
    "true",
    "false",
    "card",
}

# Longest match first.
SYMBOLS = [
    ":=",
    "/:",
    "/\\",
    "/=",
    "\\/",
    "<:",
    "<=",
    ">=",
    "=>",
    "||",
    ":",
    "=",
    "<",
    ">",
    "&",
    "-",
    "+",
    "{",
    "}",
    "(",
    ")",
    ",",
    ";",
]

RELOPS = {":", "/:", "<:", "=", "/=", "<=", "<", ">=", ">"}


@dataclass
class Token:
    kind: str  # "ident", "number", "eof", or the symbol/keyword itself
    text: str
    line: int
    col: int


def tokenize(source: str) -> list[Token]:
    tokens: list[Token] = []
    i = 0
    line = 1
    col = 1
    n = len(source)

    def advance(k: int = 1) -> None:
        nonlocal i, line, col
        for _ in range(k):
            if i < n and source[i] == "\n":
                line += 1
                col = 1
            else:
                col += 1
            i += 1

    while i < n:
        ch = source[i]
        if ch in " \t\r\n":
            advance()
            continue
        if source.startswith("/*", i):
            start_line, start_col = line, col
            advance(2)
            while i < n and not source.startswith("*/", i):
                advance()
            if i >= n:
                raise SpecSyntaxError("unterminated comment", start_line, start_col)
            advance(2)
            continue
        if ch.isalpha() or ch == "_":
            start = i
            start_line, start_col = line, col
            while i < n and (source[i].isalnum() or source[i] == "_"):
                advance()
            word = source[start:i]
            kind = word if word in KEYWORDS else "ident"
            tokens.append(Token(kind, word, start_line, start_col))
            continue
        if ch.isdigit():
            start = i
            start_line, start_col = line, col
            while i < n and source[i].isdigit():
                advance()
            tokens.append(Token("number", source[start:i], start_line, start_col))
            continue
        for sym in SYMBOLS:
            if source.startswith(sym, i):
                tokens.append(Token(sym, sym, line, col))
                advance(len(sym))
                break
        else:
            raise SpecSyntaxError(f"unexpected character {ch!r}", line, col)
    tokens.append(Token("eof", "", line, col))
    return tokens


class _Parser:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.pos = 0

    # -- token plumbing ----------------------------------------------------

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def check(self, kind: str) -> bool:
        return self.peek().kind == kind

    def match(self, kind: str) -> Token | None:
        if self.check(kind):
            return self.advance()
        return None

    def expect(self, kind: str, context: str = "") -> Token:
        tok = self.peek()
        if tok.kind != kind:
            where = f" in {context}" if context else ""
            raise SpecSyntaxError(
                f"expected {kind!r}{where}, got {tok.text or 'end of input'!r}",
                tok.line,
                tok.col,
            )
        return self.advance()

    def ident(self, context: str) -> str:
        return self.expect("ident", context).text

    # -- system ------------------------------------------------------------

    def parse_system(self) -> AbstractSystem:
        self.expect("SYSTEM")
        name = self.ident("SYSTEM header")

        sets: list[CarrierSetDecl] = []
        if self.match("SETS"):
            sets.append(CarrierSetDecl(self.ident("SETS")))
            while self.match(";"):
                sets.append(CarrierSetDecl(self.ident("SETS")))

        constants: list[str] = []
        if self.match("CONSTANTS"):
            constants.append(self.ident("CONSTANTS"))
            while self.match(","):
                constants.append(self.ident("CONSTANTS"))

        properties: Pred = Truth(True)
        if self.match("PROPERTIES"):
            properties = self.parse_pred()

        variables: list[str] = []
        if self.match("VARIABLES"):
            variables.append(self.ident("VARIABLES"))
            while self.match(","):
                variables.append(self.ident("VARIABLES"))

        self.expect("INVARIANT")
        invariant = self.parse_pred()
        self.expect("INITIALISATION")
        init = self.parse_subst()
        self.expect("EVENTS")
        events: list[EventDef] = []
        while not self.check("END"):
            events.append(self.parse_event())
            self.match(";")
        self.expect("END")
        tok = self.peek()
        if tok.kind != "eof":
            raise SpecSyntaxError(
                f"trailing input after system: {tok.text!r}", tok.line, tok.col
            )
        return AbstractSystem(
            name=name,
            sets=sets,
            constants=constants,
            properties=properties,
            variables=variables,
            invariant=invariant,
            init=init,
            events=events,
        )

    def parse_event(self) -> EventDef:
        name = self.ident("event definition")
        self.expect("=", f"event {name}")
        if self.match("ANY"):
            params = [self.ident("ANY parameters")]
            while self.match(","):
                params.append(self.ident("ANY parameters"))
            self.expect("WHERE", f"event {name}")
            guard = self.parse_pred()
            self.expect("THEN", f"event {name}")
            action = self.parse_subst()
            self.expect("END", f"event {name}")
            # Typing domains are extracted from the leading guard conjuncts
            # during validation; record the raw names for now.
            return EventDef(name, [(p, Name("?")) for p in params], guard, action)
        self.expect("SELECT", f"event {name}")
        guard = self.parse_pred()
        self.expect("THEN", f"event {name}")
        action = self.parse_subst()
        self.expect("END", f"event {name}")
        return EventDef(name, [], guard, action)

    def parse_subst(self) -> Parallel:
        if self.match("skip"):
            return Parallel([])
        assigns = [self.parse_assign()]
        while self.match("||"):
            assigns.append(self.parse_assign())
        return Parallel(assigns)

    def parse_assign(self) -> Assign:
        var = self.ident("assignment")
        self.expect(":=", f"assignment to {var}")
        return Assign(var, self.parse_expr())

    # -- predicates ----------------------------------------------------------

    def parse_pred(self) -> Pred:
        left = self.parse_disj()
        if self.match("=>"):
            return Implies(left, self.parse_pred())
        return left

    def parse_disj(self) -> Pred:
        left = self.parse_conj()
        while self.match("or"):
            left = Or(left, self.parse_conj())
        return left

    def parse_conj(self) -> Pred:
        left = self.parse_atom()
        while self.match("&"):
            left = And(left, self.parse_atom())
        return left

    def parse_atom(self) -> Pred:
        if self.match("true"):
            return Truth(True)
        if self.match("false"):
            return Truth(False)
        if self.match("not"):
            self.expect("(", "not(...)")
            body = self.parse_pred()
            self.expect(")", "not(...)")
            return Not(body)
        # Ambiguity: "(" may open a comparison operand or a parenthesised
        # predicate.  Try the comparison; backtrack on failure.
        saved = self.pos
        try:
            return self.parse_comparison()
        except SpecSyntaxError as cmp_err:
            self.pos = saved
            if not self.check("("):
                raise
            self.advance()
            try:
                body = self.parse_pred()
                self.expect(")", "parenthesised predicate")
            except SpecSyntaxError as pred_err:
                raise self._further(cmp_err, pred_err) from None
            return body

    @staticmethod
    def _further(a: SpecSyntaxError, b: SpecSyntaxError) -> SpecSyntaxError:
        return a if (a.line, a.col) >= (b.line, b.col) else b

    def parse_comparison(self) -> Compare:
        left = self.parse_expr()
        tok = self.peek()
        if tok.kind not in RELOPS:
            raise SpecSyntaxError(
                f"expected a comparison operator, got {tok.text or 'end of input'!r}",
                tok.line,
                tok.col,
            )
        self.advance()
        return Compare(tok.kind, left, self.parse_expr())

    # -- expressions -----------------------------------------------------------

    def parse_expr(self) -> Expr:
        left = self.parse_inter()
        while self.match("\\/"):
            left = BinOp("\\/", left, self.parse_inter())
        return left

    def parse_inter(self) -> Expr:
        left = self.parse_addsub()
        while self.match("/\\"):
            left = BinOp("/\\", left, self.parse_addsub())
        return left

    def parse_addsub(self) -> Expr:
        left = self.parse_primary()
        while True:
            if self.match("+"):
                left = BinOp("+", left, self.parse_primary())
            elif self.match("-"):
                left = BinOp("-", left, self.parse_primary())
            else:
                return left

    def parse_primary(self) -> Expr:
        tok = self.peek()
        if tok.kind == "ident":
            self.advance()
            return Name(tok.text)
        if tok.kind == "NAT":
            self.advance()
            return Name("NAT")
        if tok.kind == "number":
            self.advance()
            return NatLit(int(tok.text))
        if tok.kind == "card":
            self.advance()
            self.expect("(", "card(...)")
            arg = self.parse_expr()
            self.expect(")", "card(...)")
            return Card(arg)
        if tok.kind == "{":
            self.advance()
            items: list[Expr] = []
            if not self.check("}"):
                items.append(self.parse_expr())
                while self.match(","):
                    items.append(self.parse_expr())
            self.expect("}", "set literal")
            return SetLit(items)
        if tok.kind == "(":
            self.advance()
            inner = self.parse_expr()
            self.expect(")", "parenthesised expression")
            return inner
        raise SpecSyntaxError(
            f"expected an expression, got {tok.text or 'end of input'!r}",
            tok.line,
            tok.col,
        )


def parse_pred_text(text: str) -> Pred:
    """Parse a standalone predicate (test and diagnostic helper)."""
    parser = _Parser(tokenize(text))
    pred = parser.parse_pred()
    tok = parser.peek()
    if tok.kind != "eof":
        raise SpecSyntaxError(f"trailing input: {tok.text!r}", tok.line, tok.col)
    return pred


def parse_expr_text(text: str) -> Expr:
    """Parse a standalone expression (test and diagnostic helper)."""
    parser = _Parser(tokenize(text))
    expr = parser.parse_expr()
    tok = parser.peek()
    if tok.kind != "eof":
        raise SpecSyntaxError(f"trailing input: {tok.text!r}", tok.line, tok.col)
    return expr


def parse_system(text: str) -> AbstractSystem:
    """Parse and fully validate a system; no partially-validated value
    escapes.  Raises SpecSyntaxError, ScopeError, SpecTypeError,
    DuplicateError, or InitError with the offending name/position."""
    system = _Parser(tokenize(text)).parse_system()
    validate_system(system)
    return system
