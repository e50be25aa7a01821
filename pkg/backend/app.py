from flask import Flask, jsonify, request
import logging
import os

# Import extensions
from extensions import ma, residue_field
from errors import LlctError


def create_app(config_name='default'):
    """Application factory function."""
    # Import config module
    from config import config

    # Create Flask app
    app = Flask(__name__)

    # Load configuration
    app.config.from_object(config[config_name])

    # Log to stderr; stdout is reserved for CLI JSON
    logging.basicConfig(level=app.config['LOG_LEVEL'],
                        format='%(asctime)s - %(levelname)s - %(message)s')

    # Initialize extensions
    ma.init_app(app)
    residue_field.init_app(app)

    # Register the command group
    from cli import Command, llct, run
    app.cli.add_command(llct)

    # Health check endpoint
    @app.route('/health', methods=['GET'])
    def health_check():
        """Health check endpoint reporting the session residue cardinality."""
        return jsonify({
            "status": "healthy",
            "residue_cardinality": residue_field.q
        })

    @app.route('/api/<verb>', methods=['POST'])
    def api_verb(verb):
        """HTTP twin of `llct <verb>`; the body holds the verb's arguments and an optional q."""
        body = request.get_json(silent=True)
        if not isinstance(body, dict):
            return jsonify({"error": "parse_error", "message": "request body must be a JSON object"}), 400
        q = body.pop('q', None)
        text = run(Command(verb, body, q))
        return app.response_class(text + '\n', mimetype='application/json')

    # Error handlers
    @app.errorhandler(LlctError)
    def llct_error(error):
        if error.status_code >= 500:
            app.logger.error(f"Internal invariant failed: {error}")
        return jsonify(error.to_dict()), error.status_code

    @app.errorhandler(404)
    def not_found(error):
        return jsonify({"error": "Not found"}), 404

    @app.errorhandler(405)
    def method_not_allowed(error):
        return jsonify({"error": "Method not allowed"}), 405

    @app.errorhandler(500)
    def server_error(error):
        app.logger.error(f"Server error: {error}")
        return jsonify({"error": "Server error"}), 500

    return app


if __name__ == '__main__':
    # Get environment from environment variable or default to development
    env = os.environ.get('FLASK_ENV', 'development')

    # Create app with appropriate configuration
    app = create_app(env)

    # Run the app
    app.run(host='0.0.0.0', port=5000)
