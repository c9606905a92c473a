"""Academic Research Output derivatives: ROI index, AROF futures and AROO options."""
