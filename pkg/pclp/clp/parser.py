"""
Readers for program (``.pclp``) and corpus (``.qry``) text.

Grammar, one clause per line::

    clause  := atom [":-" body] "."
    body    := item ("," item)*
    item    := term "=" term | atom
    atom    := name ["(" term ("," term)* ")"]
    term    := Variable | name ["(" term ("," term)* ")"]

``%`` starts a comment. Atom arguments that are not fresh variables are replaced
by new variables plus an equation, so every atom ends up as ``r(X1,...,Xn)``
with pairwise-distinct variables.
"""

import re
from dataclasses import dataclass
from typing import Dict, List, Optional, Set, Tuple

from ..errors import ProgramSyntaxError
from ..terms import Compound, Constraint, Equation, Term, Variable, fresh_variable, term_variables
from .program import Atom, Clause, ClauseId, Program, Query

_TOKEN = re.compile(
    r"\s*(?:(?P<neck>:-)|(?P<var>[A-Z_][A-Za-z0-9_]*)|(?P<name>[a-z0-9][A-Za-z0-9_]*)|(?P<punct>[(),.=&]))"
)
_MULTIPLICITY = re.compile(r"^\s*(?P<count>\d+)\s*[×xX*]\s*(?P<rest>.*)$")


@dataclass(frozen=True)
class _Token:
    kind: str
    text: str
    column: int


class _LineParser:
    """Recursive-descent parser over the tokens of a single line."""

    def __init__(self, text: str, line: int, source: Optional[str]):
        self.line = line
        self.source = source
        self.tokens = self._tokenize(text)
        self.position = 0

    def _tokenize(self, text: str) -> List[_Token]:
        tokens: List[_Token] = []
        index = 0
        while index < len(text):
            if text[index:].strip() == "":
                break
            match = _TOKEN.match(text, index)
            if match is None or match.end() == index:
                column = index + 1 + (len(text[index:]) - len(text[index:].lstrip()))
                raise self._error(f"unexpected character {text[column - 1]!r}", column)
            kind = match.lastgroup
            tokens.append(_Token(kind, match.group(kind), match.start(kind) + 1))
            index = match.end()
        tokens.append(_Token("eol", "", len(text) + 1))
        return tokens

    def _error(self, message: str, column: int) -> ProgramSyntaxError:
        return ProgramSyntaxError(message, self.line, column, self.source)

    @property
    def current(self) -> _Token:
        return self.tokens[self.position]

    def _accept(self, text: str) -> bool:
        if self.current.text == text and self.current.kind in ("punct", "neck"):
            self.position += 1
            return True
        return False

    def _expect(self, text: str) -> None:
        if not self._accept(text):
            found = self.current.text or "end of line"
            raise self._error(f"expected '{text}' but found '{found}'", self.current.column)

    def parse_term(self) -> Term:
        token = self.current
        if token.kind == "var":
            self.position += 1
            return Variable(token.text)
        if token.kind == "name":
            self.position += 1
            args: List[Term] = []
            if self._accept("("):
                args.append(self.parse_term())
                while self._accept(","):
                    args.append(self.parse_term())
                self._expect(")")
            return Compound(token.text, tuple(args))
        found = token.text or "end of line"
        raise self._error(f"expected a term but found '{found}'", token.column)

    def parse_body(self) -> Tuple[List[Compound], List[Equation]]:
        """Atoms (still as raw compounds) and equations, in text order."""
        atoms: List[Compound] = []
        equations: List[Equation] = []
        while True:
            start = self.current
            term = self.parse_term()
            if self._accept("="):
                equations.append(Equation(term, self.parse_term()))
            elif isinstance(term, Compound):
                atoms.append(term)
            else:
                raise self._error("a variable cannot be used as a body atom", start.column)
            if not (self._accept(",") or self._accept("&")):
                break
        return atoms, equations

    def parse_clause(self) -> Tuple[Compound, List[Compound], List[Equation]]:
        start = self.current
        head = self.parse_term()
        if not isinstance(head, Compound):
            raise self._error("clause head must be an atom", start.column)
        atoms: List[Compound] = []
        equations: List[Equation] = []
        if self._accept(":-"):
            atoms, equations = self.parse_body()
        self._expect(".")
        self._expect_end()
        return head, atoms, equations

    def parse_query(self) -> Tuple[List[Compound], List[Equation]]:
        atoms, equations = self.parse_body()
        self._accept(".")
        self._expect_end()
        return atoms, equations

    def _expect_end(self) -> None:
        if self.current.kind != "eol":
            raise self._error(f"unexpected '{self.current.text}' after end of clause", self.current.column)


class _Normalizer:
    """Turns raw compounds into distinct-variable atoms plus equations."""

    def __init__(self, used: Set[str]):
        self.used = set(used)

    def atom(self, raw: Compound) -> Tuple[Atom, List[Equation]]:
        args: List[Variable] = []
        extra: List[Equation] = []
        for arg in raw.args:
            if isinstance(arg, Variable) and arg not in args:
                args.append(arg)
                continue
            fresh = fresh_variable(Variable("X"), self.used)
            self.used.add(fresh.name)
            args.append(fresh)
            extra.append(Equation(fresh, arg))
        return Atom(raw.functor, tuple(args)), extra


def _strip_comment(line: str) -> str:
    return line.split("%", 1)[0]


def _raw_variables(terms) -> Set[str]:
    names: Set[str] = set()
    for term in terms:
        names.update(var.name for var in term_variables(term))
    return names


def parse_program(text: str, source: Optional[str] = None) -> Program:
    """Parse program text; clause ids are derived from head predicate and file order."""
    raw_clauses = []
    for number, line in enumerate(text.splitlines(), 1):
        body = _strip_comment(line)
        if not body.strip():
            continue
        raw_clauses.append(_LineParser(body, number, source).parse_clause())

    choice_index: Dict[str, int] = {}
    alternative: Dict[str, int] = {}
    clauses: List[Clause] = []
    for head, atoms, equations in raw_clauses:
        used = _raw_variables([head] + atoms + [eq.lhs for eq in equations] + [eq.rhs for eq in equations])
        normalizer = _Normalizer(used)
        head_atom, head_equations = normalizer.atom(head)
        body_atoms: List[Atom] = []
        body_equations: List[Equation] = list(head_equations)
        for raw in atoms:
            atom, extra = normalizer.atom(raw)
            body_atoms.append(atom)
            body_equations.extend(extra)
        body_equations.extend(equations)

        indicator = head_atom.indicator
        choice_index.setdefault(indicator, len(choice_index) + 1)
        alternative[indicator] = alternative.get(indicator, 0) + 1
        clause_id = ClauseId(choice_index[indicator], alternative[indicator], indicator)
        clauses.append(Clause(clause_id, head_atom, tuple(body_atoms), Constraint(tuple(body_equations))))
    return Program(tuple(clauses))


def parse_query(text: str, line: int = 1, source: Optional[str] = None) -> Query:
    """Parse a single query ``atoms & equations`` (a trailing period is optional)."""
    atoms, equations = _LineParser(_strip_comment(text), line, source).parse_query()
    used = _raw_variables(atoms + [eq.lhs for eq in equations] + [eq.rhs for eq in equations])
    normalizer = _Normalizer(used)
    query_atoms: List[Atom] = []
    query_equations: List[Equation] = []
    for raw in atoms:
        atom, extra = normalizer.atom(raw)
        query_atoms.append(atom)
        query_equations.extend(extra)
    query_equations.extend(equations)
    return Query(tuple(query_atoms), Constraint(tuple(query_equations)))


def parse_corpus(text: str, source: Optional[str] = None) -> List[Query]:
    """
    Parse corpus text into a list of queries with multiplicities expanded, in
    line order. ``2× s(Z), Z = a`` (also ``2x`` or ``2*``) counts twice.
    """
    corpus: List[Query] = []
    for number, line in enumerate(text.splitlines(), 1):
        body = _strip_comment(line)
        if not body.strip():
            continue
        count = 1
        match = _MULTIPLICITY.match(body)
        if match:
            count = int(match.group("count"))
            body = match.group("rest")
            if count < 1:
                raise ProgramSyntaxError("multiplicity must be positive", number, 1, source)
        corpus.extend([parse_query(body, number, source)] * count)
    return corpus


def parse_term(text: str, line: int = 1, source: Optional[str] = None) -> Term:
    """Parse a single term, e.g. the value of an answer-binding property."""
    parser = _LineParser(text, line, source)
    term = parser.parse_term()
    parser._expect_end()
    return term
