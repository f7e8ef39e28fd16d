# Copyright 2026 The relmalcev Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Relational term language: parser, printers, left/right variables, regularity, + elimination."""
from __future__ import annotations

from typing import Dict
from typing import FrozenSet
from typing import List
from typing import NamedTuple
from typing import Union

import logging
import re

from relmalcev.classes.output_format import OutputFormat
from relmalcev.classes.rel_term import Compose
from relmalcev.classes.rel_term import Inequality
from relmalcev.classes.rel_term import Meet
from relmalcev.classes.rel_term import Plus
from relmalcev.classes.rel_term import RelTerm
from relmalcev.classes.rel_term import Variable
from relmalcev.classes.rel_term import VarId


logger = logging.getLogger(__name__)

RE_TOKEN = re.compile(
    r"\s*(?:(?P<le><=|≤)|(?P<meet>&|∧)|(?P<compose>∘)|(?P<plus>\+)"
    r"|(?P<lparen>\()|(?P<rparen>\))|(?P<ident>[^\W\d]\w*))"
)
RE_INDEXED_NAME = re.compile(r"^([^\W\d]+)(\d+)$")
RE_CANONICAL_NAME = re.compile(r"^X([1-9]\d*)$")
COMPOSE_KEYWORD = "o"
OPERATOR_SPELLINGS = {
    OutputFormat.TEXT: {Meet: " & ", Compose: " o ", Plus: " + "},
    OutputFormat.LATEX: {Meet: " \\wedge ", Compose: " \\circ ", Plus: " + "},
}
TOKEN_DESCRIPTIONS = {
    "le": "'<='",
    "meet": "'&'",
    "compose": "'o'",
    "plus": "'+'",
    "lparen": "'('",
    "rparen": "')'",
    "ident": "a variable",
    "end": "end of input",
}


class TermSyntaxError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


class Token(NamedTuple):
    kind: str
    text: str
    position: int


def tokenize(text: str) -> List[Token]:
    tokens = []
    position = 0
    while position < len(text):
        if text[position:].strip() == "":
            break
        match = RE_TOKEN.match(text, position)
        if not match:
            offset = len(text[position:]) - len(text[position:].lstrip())
            raise TermSyntaxError(
                f"Unexpected character {text[position + offset]!r}", position + offset
            )
        kind = match.lastgroup
        start = match.start(kind)
        value = match.group(kind)
        if kind == "ident" and value == COMPOSE_KEYWORD:
            kind = "compose"
        tokens.append(Token(kind, value, start))
        position = match.end()
    tokens.append(Token("end", "", len(text)))
    return tokens


class _Parser:
    """Recursive descent; meet binds tighter than compose, compose tighter than plus.

    A name X<k> denotes the variable of index k. Other names take the smallest
    index not reserved by an X<k> name, in order of first occurrence.
    """

    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.cursor = 0
        self.symbols: Dict[str, VarId] = {}
        self.reserved = {
            int(match.group(1))
            for match in (
                RE_CANONICAL_NAME.match(token.text)
                for token in self.tokens
                if token.kind == "ident"
            )
            if match
        }
        self.next_index = 1

    def variable(self, name: str) -> VarId:
        if name not in self.symbols:
            match = RE_CANONICAL_NAME.match(name)
            if match:
                self.symbols[name] = VarId(int(match.group(1)), name)
            else:
                while self.next_index in self.reserved:
                    self.next_index += 1
                self.symbols[name] = VarId(self.next_index, name)
                self.next_index += 1
        return self.symbols[name]

    def peek(self) -> Token:
        return self.tokens[self.cursor]

    def advance(self) -> Token:
        token = self.tokens[self.cursor]
        self.cursor += 1
        return token

    def expect(self, kind: str) -> Token:
        token = self.peek()
        if token.kind != kind:
            raise TermSyntaxError(
                f"Expected {TOKEN_DESCRIPTIONS[kind]} but found "
                f"{TOKEN_DESCRIPTIONS[token.kind] if token.kind == 'end' else repr(token.text)}",
                token.position,
            )
        return self.advance()

    def parse(self) -> Union[Inequality, RelTerm]:
        lhs = self.term()
        if self.peek().kind == "le":
            self.advance()
            rhs = self.term()
            self.expect("end")
            return Inequality(lhs=lhs, rhs=rhs)
        self.expect("end")
        return lhs

    def term(self) -> RelTerm:
        node = self.compose()
        while self.peek().kind == "plus":
            self.advance()
            node = Plus(node, self.compose())
        return node

    def compose(self) -> RelTerm:
        node = self.meet()
        while self.peek().kind == "compose":
            self.advance()
            node = Compose(node, self.meet())
        return node

    def meet(self) -> RelTerm:
        node = self.atom()
        while self.peek().kind == "meet":
            self.advance()
            node = Meet(node, self.atom())
        return node

    def atom(self) -> RelTerm:
        token = self.peek()
        if token.kind == "ident":
            self.advance()
            return Variable(self.variable(token.text))
        if token.kind == "lparen":
            self.advance()
            node = self.term()
            self.expect("rparen")
            return node
        found = "end of input" if token.kind == "end" else repr(token.text)
        raise TermSyntaxError(
            f"Expected a variable or '(' but found {found}", token.position
        )


def parse(text: str) -> Union[Inequality, RelTerm]:
    """Parse a term, or an inequality when the text contains '<='.

    X<k> names keep index k; other variables are numbered in order of first
    occurrence across both sides, skipping indices held by X<k> names.
    """
    if text is None or text.strip() == "":
        raise TermSyntaxError("Empty input", 0)
    return _Parser(text).parse()


def parse_term(text: str) -> RelTerm:
    parsed = parse(text)
    if isinstance(parsed, Inequality):
        raise ValueError(f"Expected a term but got an inequality: {text!r}")
    return parsed


def parse_inequality(text: str) -> Inequality:
    parsed = parse(text)
    if not isinstance(parsed, Inequality):
        raise ValueError(f"Expected an inequality 'p <= q' but got a term: {text!r}")
    return parsed


def _require_plus_free(t: RelTerm, operation: str) -> None:
    if not t.is_plus_free():
        raise ValueError(
            f"{operation} is defined for {{o, &}}-terms only; "
            f"term '{render(t)}' contains '+'. Expand it with expand_plus first."
        )


def left_vars(t: RelTerm) -> FrozenSet[VarId]:
    _require_plus_free(t, "left_vars")
    return _side_vars(t, left=True)


def right_vars(t: RelTerm) -> FrozenSet[VarId]:
    _require_plus_free(t, "right_vars")
    return _side_vars(t, left=False)


def _side_vars(t: RelTerm, left: bool) -> FrozenSet[VarId]:
    if isinstance(t, Variable):
        return frozenset([t.var])
    if isinstance(t, Compose):
        return _side_vars(t.left if left else t.right, left)
    if isinstance(t, Meet):
        return _side_vars(t.left, left) | _side_vars(t.right, left)
    raise NotImplementedError(f"Term node {type(t).__name__} not supported.")


def is_regular(t: RelTerm) -> bool:
    _require_plus_free(t, "is_regular")
    return _is_regular(t)


def _is_regular(t: RelTerm) -> bool:
    if isinstance(t, Variable):
        return True
    if not (_is_regular(t.left) and _is_regular(t.right)):
        return False
    if isinstance(t, Compose):
        return not (_side_vars(t.left, False) & _side_vars(t.right, True))
    if isinstance(t, Meet):
        return not (
            _side_vars(t.left, True) & _side_vars(t.right, True)
            or _side_vars(t.left, False) & _side_vars(t.right, False)
        )
    raise NotImplementedError(f"Term node {type(t).__name__} not supported.")


def kfold_term(u: RelTerm, v: RelTerm, k: int) -> RelTerm:
    """u o v o u o ... with exactly k factors, left-associated."""
    if k < 1:
        raise ValueError(f"k-fold product needs k >= 1, got {k}.")
    node = u
    for position in range(1, k):
        node = Compose(node, v if position % 2 == 1 else u)
    return node


def expand_plus(t: RelTerm, k: int) -> RelTerm:
    """Replace every '+' by the k-fold relational product."""
    if k < 2:
        raise ValueError(f"expand_plus needs k >= 2, got {k}.")
    if t.is_plus_free():
        return t
    return _expand(t, k)


def _expand(t: RelTerm, k: int) -> RelTerm:
    if isinstance(t, Variable):
        return t
    left, right = _expand(t.left, k), _expand(t.right, k)
    if isinstance(t, Plus):
        return kfold_term(left, right, k)
    return type(t)(left, right)


def variables(t: RelTerm) -> List[VarId]:
    """Distinct variables in first-occurrence order."""
    seen: Dict[VarId, None] = {}
    for node in t.walk():
        if isinstance(node, Variable):
            seen.setdefault(node.var, None)
    return list(seen)


def occurrences(t: RelTerm) -> int:
    return sum(1 for node in t.walk() if isinstance(node, Variable))


def compose_count(t: RelTerm) -> int:
    return sum(1 for node in t.walk() if isinstance(node, Compose))


def _latex_name(var: VarId) -> str:
    match = RE_INDEXED_NAME.match(var.display_name)
    if match:
        return f"{match.group(1)}_{{{match.group(2)}}}"
    return var.display_name


def render(t: RelTerm, format: Union[str, OutputFormat] = OutputFormat.TEXT) -> str:
    """Print with the fewest parentheses that still reparse to the same tree."""
    output_format = OutputFormat.from_name(format)
    if output_format not in OPERATOR_SPELLINGS:
        raise ValueError(f"Terms render as text or latex, not {output_format.value}.")
    return _render(t, output_format)


def _render(t: RelTerm, output_format: OutputFormat) -> str:
    if isinstance(t, Variable):
        if output_format == OutputFormat.LATEX:
            return _latex_name(t.var)
        return t.var.display_name
    left = _render(t.left, output_format)
    right = _render(t.right, output_format)
    if t.left.precedence < t.precedence:
        left = f"({left})"
    # left-associative operators: an equal-precedence right child needs parentheses
    if t.right.precedence <= t.precedence:
        right = f"({right})"
    return f"{left}{OPERATOR_SPELLINGS[output_format][type(t)]}{right}"


def render_inequality(
    ineq: Inequality, format: Union[str, OutputFormat] = OutputFormat.TEXT
) -> str:
    output_format = OutputFormat.from_name(format)
    separator = " \\leq " if output_format == OutputFormat.LATEX else " <= "
    return f"{render(ineq.lhs, output_format)}{separator}{render(ineq.rhs, output_format)}"
