from sqlalchemy import Column, Integer, String, DateTime, Float, ForeignKey, Text, BigInteger
from sqlalchemy.orm import declarative_base, relationship
from datetime import datetime

Base = declarative_base()

class ExperimentRun(Base):
    __tablename__ = 'experiment_runs'

    id = Column(Integer, primary_key=True)
    name = Column(String(100), nullable=True)
    label = Column(String(50), nullable=False)  # Coord-egreedy-AVG, OBSS-PD, ...
    environment = Column(String(20), nullable=False)
    strategy = Column(String(30), nullable=False)
    reward = Column(String(20), nullable=False)
    base_seed = Column(BigInteger, nullable=False)
    drops = Column(Integer, nullable=False)
    iterations = Column(Integer, nullable=False)
    out_dir = Column(String(255), nullable=False)
    manifest = Column(Text, nullable=False)
    status = Column(String(20), default='running')  # running, completed, failed
    created_at = Column(DateTime, default=datetime.utcnow)
    finished_at = Column(DateTime, nullable=True)

    drop_results = relationship("DropResult", back_populates="run", cascade="all, delete-orphan")
    logs = relationship("Log", back_populates="run")

class DropResult(Base):
    __tablename__ = 'drop_results'

    id = Column(Integer, primary_key=True)
    run_id = Column(Integer, ForeignKey('experiment_runs.id'))
    drop = Column(Integer, nullable=False)
    seed = Column(String(20), nullable=False)  # unsigned 64-bit, kept as text
    status = Column(String(20), nullable=False)
    error = Column(Text, nullable=True)
    mean_throughput_mbps = Column(Float, nullable=True)
    min_throughput_mbps = Column(Float, nullable=True)
    max_throughput_mbps = Column(Float, nullable=True)
    max_delay_ms = Column(Float, nullable=True)
    mean_reward = Column(Float, nullable=True)
    jain_fairness = Column(Float, nullable=True)
    modal_action = Column(Integer, nullable=True)

    run = relationship("ExperimentRun", back_populates="drop_results")

class Log(Base):
    __tablename__ = 'logs'

    id = Column(Integer, primary_key=True)
    timestamp = Column(DateTime, default=datetime.utcnow)
    level = Column(String(20), nullable=False)  # WARNING, ERROR
    source = Column(String(100), nullable=False)  # logger name
    message = Column(Text, nullable=False)
    run_id = Column(Integer, ForeignKey('experiment_runs.id'), nullable=True)

    run = relationship("ExperimentRun", back_populates="logs")
