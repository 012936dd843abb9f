from padicskew.cli import main

raise SystemExit(main())
