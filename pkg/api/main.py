"""Main API entry point.

This module initializes the FastAPI application for the annealing benchmark
harness and includes the benchmark and campaign routers.
"""
from fastapi import FastAPI

from annealing import __version__
from api.routers.benchmarks import router as benchmarks_router
from api.routers.campaigns import router as campaigns_router

app = FastAPI(
    title="Coupled Simulated Annealing Harness",
    description="API for evaluating benchmark functions and running CSA / PO-CSA campaigns",
    version=__version__,
)

app.include_router(benchmarks_router, prefix="/api")
app.include_router(campaigns_router, prefix="/api")


# Root endpoint for health check and basic information
@app.get("/")
async def root():
    """Return basic API information and health status."""
    return {
        "status": "healthy",
        "app": "Coupled Simulated Annealing Harness",
        "endpoints": [
            {"path": "/api/benchmarks", "method": "GET", "description": "List benchmark functions"},
            {"path": "/api/benchmarks/evaluate", "method": "POST", "description": "Evaluate a benchmark at a point"},
            {"path": "/api/campaigns/run", "method": "POST", "description": "Run one campaign"},
            {"path": "/api/campaigns/sweep", "method": "POST", "description": "Run the B-CSA initial temperature sweep"},
        ],
    }
