"""Extensions module to avoid circular imports."""
from contextlib import contextmanager

from flask import current_app, g
from flask_marshmallow import Marshmallow

from exact_algebra import enter_session, exit_session, session, validate_q


class ResidueField:
    """Holds the residue cardinality q of the app and opens a session per request."""

    def __init__(self, app=None):
        if app is not None:
            self.init_app(app)

    def init_app(self, app):
        app.config['RESIDUE_CARDINALITY'] = validate_q(app.config.get('RESIDUE_CARDINALITY', 3))
        app.extensions['residue_field'] = self

        @app.before_request
        def _open_session():
            g._residue_token = enter_session(app.config['RESIDUE_CARDINALITY'])

        @app.teardown_request
        def _close_session(exc):
            token = g.pop('_residue_token', None)
            if token is not None:
                exit_session(token)

    @property
    def q(self):
        return current_app.config['RESIDUE_CARDINALITY']

    @contextmanager
    def session(self, q=None):
        """Session for q, or for the configured value when q is None."""
        with session(self.q if q is None else q) as value:
            yield value


# Initialize extensions
ma = Marshmallow()
residue_field = ResidueField()
