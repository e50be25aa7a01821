import os
from dotenv import load_dotenv

# Load environment variables from .env file if it exists
load_dotenv()


class Config:
    """Base configuration."""
    SECRET_KEY = os.environ.get('SECRET_KEY', 'dev-key-please-change-in-production')

    # Residue cardinality q of the local field; fixed for a whole session
    RESIDUE_CARDINALITY = int(os.environ.get('LLCT_Q', '3'))
    LOG_LEVEL = os.environ.get('LLCT_LOG_LEVEL', 'INFO')

    # Zeta integrals are truncated at this T-degree unless a bound is given
    ZETA_BOUND = int(os.environ.get('LLCT_ZETA_BOUND', '40'))

    # Sign constancy: pure points wanted, candidate points scanned
    SIGN_SAMPLES = 20
    SIGN_CANDIDATES = 200


class DevelopmentConfig(Config):
    """Development configuration."""
    DEBUG = True
    LOG_LEVEL = os.environ.get('LLCT_LOG_LEVEL', 'DEBUG')


class TestingConfig(Config):
    """Testing configuration."""
    TESTING = True
    RESIDUE_CARDINALITY = 3
    LOG_LEVEL = 'WARNING'


class ProductionConfig(Config):
    """Production configuration."""
    DEBUG = False
    TESTING = False


# Dictionary with different configuration environments
config = {
    'development': DevelopmentConfig,
    'testing': TestingConfig,
    'production': ProductionConfig,
    'default': DevelopmentConfig
}
