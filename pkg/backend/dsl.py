"""Text form of representations: a small recursive-descent parser and the matching renderer.

Grammar (docs/dsl.md has the full description):

    rep     := '0' | term ('+' term)*
    term    := 'Sp(' atom ',' int ')'
    atom    := 'unr(' scalar ')' | 'tau(' label (',' key '=' value)* ')' ['*' 'unr(' scalar ')']
    scalar  := product (('+' | '-') product)*   one Scalar: sums only inside the x part
    product := ['-'] factor ('*' factor)*
    factor  := rational | 'q' ['^' exponent] | 'zeta(' int ',' int ')' | 'x' ['^' int]
             | unit ['^' exponent] | '(' scalar ')'
"""
import re
from fractions import Fraction

from errors import DomainError, ParseError
from exact_algebra import LaurentPoly, Scalar, ScalarSum, current_q
from matrices import Matrix
from weil_deligne import UNRAMIFIED, InertialAtom, SpehBlock, WDFamily, WDRep, unramified_atom

_TOKEN = re.compile(r'(?P<space>\s+)|(?P<num>\d+(?:/\d+)?)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[()+\-*^,=;])')

_INT_KEYS = ('dim', 'f', 'cond')
_ATOM_KEYS = _INT_KEYS + ('w', 'dual', 'eps', 'dual_eps')
_RESERVED = ('q', 'x', 'zeta', 'Sp', 'unr', 'tau')


class _Token:
    __slots__ = ('kind', 'text', 'line', 'column')

    def __init__(self, kind, text, line, column):
        self.kind = kind
        self.text = text
        self.line = line
        self.column = column

    def __repr__(self):
        return f'<Token {self.kind} {self.text!r} {self.line}:{self.column}>'


def _tokenize(text):
    tokens = []
    line, line_start, pos = 1, 0, 0
    while pos < len(text):
        match = _TOKEN.match(text, pos)
        if match is None:
            raise ParseError(f'unexpected character {text[pos]!r}', line, pos - line_start + 1)
        kind = match.lastgroup
        value = match.group(kind)
        if kind == 'space':
            for offset, char in enumerate(value):
                if char == '\n':
                    line += 1
                    line_start = pos + offset + 1
        else:
            tokens.append(_Token(kind, value, line, pos - line_start + 1))
        pos = match.end()
    tokens.append(_Token('end', '', line, pos - line_start + 1))
    return tokens


class _Parser:
    def __init__(self, text, q=None):
        self.tokens = _tokenize(text)
        self.index = 0
        self.q = current_q() if q is None else q

    @property
    def token(self):
        return self.tokens[self.index]

    def error(self, message, expected=(), token=None):
        token = token or self.token
        found = token.text or 'end of input'
        return ParseError(f'{message}, found {found!r}', token.line, token.column, expected)

    def at(self, text):
        return self.token.text == text and self.token.kind != 'end'

    def accept(self, text):
        if self.at(text):
            self.index += 1
            return True
        return False

    def expect(self, text):
        if not self.accept(text):
            raise self.error('syntax error', [repr(text)])

    def expect_name(self, what='name'):
        token = self.token
        if token.kind != 'name':
            raise self.error('syntax error', [what])
        self.index += 1
        return token.text

    def integer(self):
        negative = self.accept('-')
        token = self.token
        if token.kind != 'num' or '/' in token.text:
            raise self.error('syntax error', ['integer'])
        self.index += 1
        return -int(token.text) if negative else int(token.text)

    def rational(self):
        negative = self.accept('-')
        token = self.token
        if token.kind != 'num':
            raise self.error('syntax error', ['rational'])
        self.index += 1
        value = Fraction(token.text)
        return -value if negative else value

    def finish(self):
        if self.token.kind != 'end':
            raise self.error('trailing input', ['end of input'])

    # --- representations

    def rep(self):
        if self.token.kind == 'num' and self.token.text == '0':
            self.index += 1
            return WDRep()
        start = self.token
        blocks = [self.term()]
        while self.accept('+'):
            blocks.append(self.term())
        return self.semantic(lambda: WDRep(blocks), start)

    def semantic(self, build, token):
        try:
            return build()
        except DomainError as exc:
            raise ParseError(f'semantic error: {exc}', token.line, token.column)

    def term(self):
        start = self.token
        if self.expect_name("'Sp'") != 'Sp':
            raise self.error('syntax error', ["'Sp'"], start)
        self.expect('(')
        atom, alpha = self.twisted_atom()
        self.expect(',')
        m = self.integer()
        self.expect(')')
        return self.semantic(lambda: SpehBlock(atom, alpha, m), start)

    def twisted_atom(self):
        start = self.token
        head = self.expect_name("'unr' or 'tau'")
        if head == 'unr':
            return unramified_atom(), self.unr_argument()
        if head != 'tau':
            raise self.error('syntax error', ["'unr'", "'tau'"], start)
        self.expect('(')
        label_token = self.token
        label = self.expect_name('label')
        if label in _RESERVED:
            raise self.error(f'reserved label {label!r}', ['label'], label_token)
        options = {}
        while self.accept(','):
            key_token = self.token
            key = self.expect_name('key')
            if key not in _ATOM_KEYS:
                raise self.error(f'unknown atom key {key!r}', _ATOM_KEYS, key_token)
            if key in options:
                raise self.error(f'repeated atom key {key!r}', (), key_token)
            self.expect('=')
            options[key] = self.atom_value(key)
        self.expect(')')
        alpha = Scalar(1, q=self.q)
        if self.accept('*'):
            if self.expect_name("'unr'") != 'unr':
                raise self.error('syntax error', ["'unr'"], self.tokens[self.index - 1])
            alpha = self.unr_argument()
        atom = self.semantic(lambda: InertialAtom(
            label, dim=options.get('dim', 1), f=options.get('f', 1), cond=options.get('cond', 0),
            eps_unit=options.get('eps'), weight=options.get('w', 0), dual_label=options.get('dual'),
            dual_eps_unit=options.get('dual_eps')), start)
        return atom, alpha

    def atom_value(self, key):
        if key in _INT_KEYS:
            return self.integer()
        if key == 'w':
            return self.rational()
        if key == 'dual':
            return self.expect_name('label')
        return self.monomial()

    def unr_argument(self):
        self.expect('(')
        value = self.monomial()
        self.expect(')')
        return value

    # --- scalars

    def monomial(self):
        start = self.token
        value = self.scalar_sum()
        scalar = value.as_scalar()
        if scalar is None:
            raise ParseError(f'semantic error: {value.render()} is not a single scalar', start.line, start.column)
        return scalar

    def scalar_sum(self):
        total = self.product()
        while self.at('+') or self.at('-'):
            if self.accept('+'):
                total = total + self.product()
            else:
                self.expect('-')
                total = total - self.product()
        return total

    def product(self):
        negative = self.accept('-')
        value = self.factor()
        while self.accept('*'):
            value = value * self.factor()
        return -value if negative else value

    def exponent(self):
        if self.accept('('):
            value = self.rational()
            self.expect(')')
            return value
        return Fraction(self.integer())

    def factor(self):
        token = self.token
        if token.kind == 'num':
            self.index += 1
            return ScalarSum.coerce(Fraction(token.text), self.q)
        if self.accept('('):
            value = self.scalar_sum()
            self.expect(')')
            return value
        if token.kind != 'name':
            raise self.error('syntax error', ['rational', "'q'", "'x'", "'zeta'", 'unit', "'('"])
        self.index += 1
        if token.text == 'q':
            exponent = self.exponent() if self.accept('^') else Fraction(1)
            if (2 * exponent).denominator != 1:
                raise self.error('q exponents must be half integers', (), token)
            return Scalar.q_power(exponent, q=self.q).to_sum()
        if token.text == 'x':
            power = self.integer() if self.accept('^') else 1
            return Scalar(xpoly=LaurentPoly.monomial(1, power), q=self.q).to_sum()
        if token.text == 'zeta':
            self.expect('(')
            a = self.integer()
            self.expect(',')
            n = self.integer()
            self.expect(')')
            if n <= 0:
                raise self.error('root of unity order must be positive', (), token)
            return Scalar.root(a, n, q=self.q).to_sum()
        if token.text in _RESERVED:
            raise self.error(f'{token.text!r} is not a scalar', ['rational', "'q'", "'x'", "'zeta'", 'unit'], token)
        power = self.exponent() if self.accept('^') else Fraction(1)
        if power.denominator != 1:
            raise self.error('unit exponents must be integers', (), token)
        return Scalar(word=((token.text, int(power)),), q=self.q).to_sum()


def parse_wd(text, q=None):
    """Canonical WDRep from its text form; alphas may involve x."""
    parser = _Parser(text, q)
    rep = parser.rep()
    parser.finish()
    return rep


def parse_family(text, bad_points=(), special=None, q=None):
    """Structured family; special maps rational points to the text of a declared fiber."""
    rep = parse_wd(text, q)
    fibers = {point: parse_wd(fiber, q) for point, fiber in (special or {}).items()}
    try:
        return WDFamily(rep=rep, bad_points=bad_points, special=fibers)
    except DomainError as exc:
        raise ParseError(f'semantic error: {exc}')


def parse_scalar(text, q=None):
    parser = _Parser(text, q)
    value = parser.monomial()
    parser.finish()
    return value


def parse_scalar_list(text, q=None):
    """Comma-separated scalars, e.g. '2,3' or 'q^(1/2),zeta(1,3)'."""
    parser = _Parser(text, q)
    values = [parser.monomial()]
    while parser.accept(','):
        values.append(parser.monomial())
    parser.finish()
    return values


def parse_matrix(text, q=None):
    """Rows separated by ';', entries by ','; entries may be sums."""
    parser = _Parser(text, q)
    rows = [[parser.scalar_sum()]]
    while parser.token.kind != 'end':
        if parser.accept(';'):
            rows.append([parser.scalar_sum()])
        else:
            parser.expect(',')
            rows[-1].append(parser.scalar_sum())
    try:
        return Matrix(rows, parser.q)
    except DomainError as exc:
        raise ParseError(f'semantic error: {exc}')


# ---------------------------------------------------------------------------
# Rendering

def render_atom(atom):
    if atom.unramified:
        return UNRAMIFIED
    options = [atom.label]
    if atom.dim != 1:
        options.append(f'dim={atom.dim}')
    if atom.f != 1:
        options.append(f'f={atom.f}')
    options.append(f'cond={atom.cond}')
    if atom.weight:
        options.append(f'w={atom.weight}')
    if atom.dual_label is not None:
        options.append(f'dual={atom.dual_label}')
    if atom.eps_unit != Scalar.opaque(f'eps_{atom.label}', q=atom.eps_unit.q):
        options.append(f'eps={atom.eps_unit.render()}')
    if atom.dual_label is not None:
        default = atom.eps_unit if atom.dual_label == atom.label else \
            Scalar.opaque(f'eps_{atom.dual_label}', q=atom.eps_unit.q)
        if atom.dual_eps_unit != default:
            options.append(f'dual_eps={atom.dual_eps_unit.render()}')
    return f"tau({','.join(options)})"


def render_twisted_atom(atom, alpha):
    if atom.unramified:
        return f'unr({alpha.render()})'
    return f'{render_atom(atom)}*unr({alpha.render()})'


def render_block(block):
    return f'Sp({render_twisted_atom(block.atom, block.alpha)},{block.m})'


def render_wd(r):
    if not r.blocks:
        return '0'
    return '+'.join(render_block(b) for b in r.blocks)
