from pcfg_engine.cli import main

raise SystemExit(main())
