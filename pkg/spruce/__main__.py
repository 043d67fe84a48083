from spruce.main import main

main()
