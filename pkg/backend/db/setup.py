import os
from sqlalchemy import create_engine
from sqlalchemy.orm import sessionmaker
from .models import Base
import constants

def setup(url=None):
    # results ledger; sqlite file by default
    url = url or os.environ.get(constants.DATABASE_URL_ENV_VAR, constants.DEFAULT_DATABASE_URL)
    engine = create_engine(url)

    # create experiment, drop and log tables
    Base.metadata.create_all(engine)

    # Create and return session maker
    return sessionmaker(bind=engine)
