from anharmonic.routers import spectra
